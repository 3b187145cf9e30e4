#include "core/qa_backend.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>
#include <semaphore>
#include <thread>

#include <httplib.h>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/log.hpp"
#include "core/text.hpp"

namespace vespa {

namespace {

struct TokenSpan {
  std::size_t begin;
  std::size_t end;
};

constexpr std::string_view kLeadingStrip = "(\"'[{";
constexpr std::string_view kTrailingStrip = ",;:)\"']}";

std::vector<TokenSpan> token_spans(std::string_view s) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t e = i;
    while (b < e && kLeadingStrip.find(s[b]) != std::string_view::npos) ++b;
    while (e > b && kTrailingStrip.find(s[e - 1]) != std::string_view::npos) --e;
    if (e > b) out.push_back({b, e});
  }
  return out;
}

DistractorKind kind_of(std::string_view s) {
  for (char c : s)
    if (std::isdigit(static_cast<unsigned char>(c))) return DistractorKind::Numeric;
  return DistractorKind::Word;
}

bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

double in_band(const ConfidenceBand& band, double u) { return band.lo + u * (band.hi - band.lo); }

class Draws {
public:
  Draws(std::uint64_t seed, std::string_view backend, const QaRequest& req) {
    std::uint64_t h = text::splitmix64(seed);
    h = text::fnv1a(backend, h);
    h = text::fnv1a(std::string_view("\x1f", 1), h);
    h = text::fnv1a(req.passage_id, h);
    h = text::fnv1a(std::string_view("\x1f", 1), h);
    key_ = text::fnv1a(req.question_text, h);
  }
  double operator()(std::uint64_t stream) const { return text::unit_interval(text::splitmix64(key_ + stream)); }

private:
  std::uint64_t key_ = 0;
};

QaResponse distractor(const MockSpec& spec, const QaRequest& req, const std::string* gold, const Draws& draw) {
  DistractorKind want = DistractorKind::Any;
  if (gold) {
    want = kind_of(*gold);
  } else if (auto it = spec.distractor_kinds.find(req.field_name); it != spec.distractor_kinds.end()) {
    want = it->second;
  }
  const auto gold_lower = gold ? text::to_lower(*gold) : std::string();
  std::vector<TokenSpan> pool;
  for (const auto& sp : token_spans(req.passage_text)) {
    const auto tok = std::string_view(req.passage_text).substr(sp.begin, sp.end - sp.begin);
    if (!has_alnum(tok)) continue;
    if (want != DistractorKind::Any && kind_of(tok) != want) continue;
    if (gold && gold_lower.find(text::to_lower(tok)) != std::string::npos) continue;
    pool.push_back(sp);
  }
  QaResponse r;
  r.raw_confidence = in_band(spec.wrong, draw(1));
  if (pool.empty()) return r;
  const auto pick = std::min(pool.size() - 1, static_cast<std::size_t>(draw(2) * static_cast<double>(pool.size())));
  r.answer_text = req.passage_text.substr(pool[pick].begin, pool[pick].end - pool[pick].begin);
  r.span = std::make_pair(pool[pick].begin, pool[pick].end);
  return r;
}

struct EndpointParts {
  std::string host;
  int port = 80;
  std::string base;
};

EndpointParts parse_endpoint(const std::string& endpoint) {
  constexpr std::string_view scheme = "http://";
  if (!text::starts_with_icase(endpoint, scheme))
    throw ConfigError("endpoint must use http://: " + endpoint);
  auto rest = endpoint.substr(scheme.size());
  EndpointParts p;
  const auto slash = rest.find('/');
  auto hostport = rest.substr(0, slash);
  if (slash != std::string::npos) p.base = rest.substr(slash);
  while (!p.base.empty() && p.base.back() == '/') p.base.pop_back();
  const auto colon = hostport.rfind(':');
  if (colon != std::string::npos) {
    try {
      p.port = std::stoi(hostport.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("invalid port in endpoint: " + endpoint);
    }
    hostport = hostport.substr(0, colon);
  }
  if (hostport.empty()) throw ConfigError("missing host in endpoint: " + endpoint);
  p.host = hostport;
  return p;
}

std::counting_semaphore<>& endpoint_slots(const std::string& endpoint, int limit) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<std::counting_semaphore<>>> slots;
  std::lock_guard lock(mu);
  auto& slot = slots[endpoint];
  if (!slot) slot = std::make_unique<std::counting_semaphore<>>(std::max(1, limit));
  return *slot;
}

class SlotGuard {
public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

private:
  std::counting_semaphore<>& s_;
};

}  // namespace

double MockSpec::accuracy(QuestionClass c) const {
  const auto& v = per_class_accuracy[index_of(c)];
  return v ? *v : default_accuracy;
}

const std::string* MockSpec::gold_for(std::string_view passage_id, std::string_view field) const {
  const auto doc_id = passage_id.substr(0, passage_id.find('/'));
  for (const auto scope : {passage_id, doc_id, std::string_view("*")}) {
    const auto it = gold_table.find({std::string(scope), std::string(field)});
    if (it != gold_table.end()) return &it->second;
  }
  return nullptr;
}

void validate_mock_spec(const MockSpec& spec) {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  for (const auto& a : spec.per_class_accuracy)
    if (a && !in_unit(*a)) throw ConfigError("mock accuracy outside [0,1]");
  if (!in_unit(spec.default_accuracy)) throw ConfigError("mock default accuracy outside [0,1]");
  for (const auto& b : {spec.correct, spec.wrong})
    if (!in_unit(b.lo) || !in_unit(b.hi) || b.lo > b.hi) throw ConfigError("mock confidence band invalid");
  if (spec.correct.lo < spec.wrong.hi) throw ConfigError("mock correct band must lie above the wrong band");
}

QaResponse mock_answer(const MockSpec& spec, std::string_view backend_name, const QaRequest& req) {
  const Draws draw(spec.seed, backend_name, req);
  const std::string* gold = spec.gold_for(req.passage_id, req.field_name);
  const auto at = (gold && !gold->empty()) ? req.passage_text.find(*gold) : std::string::npos;

  if (at == std::string::npos) {
    if (spec.absent_policy == AbsentPolicy::Distract) return distractor(spec, req, gold, draw);
    QaResponse r;
    r.raw_confidence = in_band(spec.correct, draw(1));
    return r;
  }
  if (draw(0) < spec.accuracy(req.question_class)) {
    QaResponse r;
    r.answer_text = *gold;
    r.span = std::make_pair(at, at + gold->size());
    r.raw_confidence = in_band(spec.correct, draw(1));
    return r;
  }
  return distractor(spec, req, gold, draw);
}

MockBackend::MockBackend(std::string name, MockSpec spec) : name_(std::move(name)), spec_(std::move(spec)) {
  validate_mock_spec(spec_);
}

RemoteBackend::RemoteBackend(BackendDescriptor desc) : desc_(std::move(desc)) {
  const auto parts = parse_endpoint(desc_.endpoint);
  host_ = parts.host;
  port_ = parts.port;
  base_path_ = parts.base;
}

QaResponse RemoteBackend::ask(const QaRequest& req) const {
  const auto body = serialize_wire_request(req);
  SlotGuard guard(endpoint_slots(desc_.endpoint, desc_.max_in_flight));
  std::string last_error;
  for (int attempt = 0; attempt <= desc_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(desc_.backoff_base * (1 << (attempt - 1)));
    httplib::Client client(host_, port_);
    const auto secs = std::chrono::duration_cast<std::chrono::microseconds>(desc_.timeout);
    client.set_connection_timeout(secs.count() / 1000000, secs.count() % 1000000);
    client.set_read_timeout(secs.count() / 1000000, secs.count() % 1000000);
    client.set_write_timeout(secs.count() / 1000000, secs.count() % 1000000);
    auto res = client.Post(base_path_ + "/answer", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      break;
    }
    try {
      return parse_wire_response(res->body, req.passage_text);
    } catch (const DataError& e) {
      last_error = e.what();
      break;
    }
  }
  throw BackendUnavailable(desc_.name, "backend " + desc_.name + " unavailable: " + last_error);
}

bool RemoteBackend::healthy() const {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(desc_.timeout).count() + 1, 0);
  auto res = client.Get(base_path_ + "/health");
  return res && res->status == 200;
}

std::unique_ptr<QaBackend> make_backend(const BackendDescriptor& desc) {
  if (desc.kind == BackendKind::Mock) {
    if (!desc.mock) throw ConfigError("mock backend " + desc.name + " has no mock spec");
    return std::make_unique<MockBackend>(desc.name, *desc.mock);
  }
  return std::make_unique<RemoteBackend>(desc);
}

QaResponse ask(const BackendDescriptor& desc, const QaRequest& req) { return make_backend(desc)->ask(req); }

std::string serialize_wire_request(const QaRequest& req) {
  jsonutil::ojson j;
  j["question"] = req.question_text;
  j["context"] = req.passage_text;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::size_t codepoint_to_byte_offset(std::string_view utf8, std::size_t cp) {
  std::size_t byte = 0, seen = 0;
  while (byte < utf8.size() && seen < cp) {
    const auto c = static_cast<unsigned char>(utf8[byte]);
    byte += c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : 4;
    ++seen;
  }
  return std::min(byte, utf8.size());
}

QaResponse parse_wire_response(std::string_view body, std::string_view passage_text) {
  jsonutil::ojson j;
  try {
    j = jsonutil::ojson::parse(body);
  } catch (const jsonutil::ojson::exception& e) {
    throw DataError(std::string("malformed answer reply: ") + e.what());
  }
  if (!j.is_object() || !j.contains("answer") || !j["answer"].is_string() || !j.contains("score") ||
      !j["score"].is_number())
    throw DataError("answer reply missing \"answer\" or \"score\"");

  QaResponse r;
  double score = j["score"].get<double>();
  if (!std::isfinite(score)) throw DataError("answer reply has non-finite score");
  if (score < 0.0 || score > 1.0) {
    r.clamped = true;
    score = std::clamp(score, 0.0, 1.0);
  }
  r.raw_confidence = score;
  const auto answer = j["answer"].get<std::string>();
  if (answer.empty()) return r;

  long long start = j.contains("start") && j["start"].is_number_integer() ? j["start"].get<long long>() : -1;
  long long end = j.contains("end") && j["end"].is_number_integer() ? j["end"].get<long long>() : -1;
  if (start >= 0 && end >= start) {
    const auto b = codepoint_to_byte_offset(passage_text, static_cast<std::size_t>(start));
    const auto e = codepoint_to_byte_offset(passage_text, static_cast<std::size_t>(end));
    if (passage_text.substr(b, e - b) == answer) {
      r.answer_text = answer;
      r.span = std::make_pair(b, e);
      return r;
    }
  }
  // Offsets disagree with the text: fall back to the first verbatim occurrence.
  const auto at = passage_text.find(answer);
  if (at == std::string_view::npos) {
    r.note = "non-extractive answer dropped";
    log::warn("remote answer is not a substring of the passage; treating as abstention");
    return r;
  }
  r.answer_text = answer;
  r.span = std::make_pair(at, at + answer.size());
  r.note = "span repaired";
  return r;
}

}  // namespace vespa
