#include "synth.hpp"

#include <cstdio>
#include <random>

#include "core/profile.hpp"
#include "core/question.hpp"
#include "core/text.hpp"

namespace vespa::synth {

namespace {

const std::vector<std::string> kVendorHeads = {"Acme",    "Globex",  "Initech", "Umbrella", "Stark",  "Wayne",
                                               "Wonka",   "Hooli",   "Vandelay", "Soylent", "Cyberdyne", "Tyrell",
                                               "Gringotts", "Oceanic", "Prestige", "Monarch"};
const std::vector<std::string> kVendorTails = {"Widgets", "Logistics", "Telecom", "Manufacturing", "Supplies",
                                               "Freight", "Systems", "Industries"};
const std::vector<std::string> kSuffixes = {"Inc", "LLC", "Ltd", "Corp"};
const std::vector<std::string> kCustomers = {"Northwind", "Contoso", "Fabrikam", "Tailspin", "Litware", "Adatum",
                                             "Proseware", "Woodgrove", "Lucerne", "Wingtip", "Humongous", "Trey"};
const std::vector<std::string> kCustomerTails = {"Traders", "Retail", "Bank", "Airlines", "Publishing", "Research"};
const std::vector<std::string> kItems = {"Steel brackets", "Copper wire", "Service hours", "Freight charge",
                                         "Toner cartridges", "Network switch", "Consulting", "Pallet wrap"};
const char* kMonths[] = {"January", "February", "March",     "April",   "May",      "June",
                         "July",    "August",   "September", "October", "November", "December"};

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
};

std::string two(int v) {
  char b[8];
  std::snprintf(b, sizeof b, "%02d", v);
  return b;
}

std::string money(long cents) {
  const long whole = cents / 100;
  std::string digits = std::to_string(whole);
  std::string grouped;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) grouped.push_back(',');
    grouped.push_back(digits[i]);
  }
  return grouped + "." + two(static_cast<int>(cents % 100));
}

std::string plain_money(long cents) { return std::to_string(cents / 100) + "." + two(static_cast<int>(cents % 100)); }

struct Day {
  int y, m, d;
};

Day add_days(Day day, int n) {
  static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  auto month_len = [](int y, int m) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return len[m - 1] + (m == 2 && leap ? 1 : 0);
  };
  day.d += n;
  while (day.d > month_len(day.y, day.m)) {
    day.d -= month_len(day.y, day.m);
    if (++day.m > 12) {
      day.m = 1;
      ++day.y;
    }
  }
  return day;
}

std::string long_date(Day d) { return std::string(kMonths[d.m - 1]) + " " + std::to_string(d.d) + ", " + std::to_string(d.y); }
std::string iso(Day d) { return std::to_string(d.y) + "-" + two(d.m) + "-" + two(d.d); }

}  // namespace

Invoice make_invoice(std::uint64_t seed, std::size_t index, const InvoiceOptions& opts) {
  Rng rng(text::splitmix64(seed * 0x9E3779B97F4A7C15ULL + index));
  Invoice inv;
  char id[32];
  std::snprintf(id, sizeof id, "inv-%04zu", index);
  inv.doc_id = id;

  const std::string vendor = rng.pick(kVendorHeads) + " " + rng.pick(kVendorTails) + " " + rng.pick(kSuffixes);
  std::string customer = rng.pick(kCustomers) + " " + rng.pick(kCustomerTails) + " " + rng.pick(kSuffixes);
  const std::string number = "INV-" + std::to_string(rng.between(10000, 99999));
  const Day issued{rng.between(2018, 2022), rng.between(1, 12), rng.between(1, 28)};
  const Day due = add_days(issued, rng.between(10, 45));
  const Day shipped = add_days(issued, rng.between(1, 5));

  std::string lines;
  long total = 0;
  const int n_items = rng.between(2, 4);
  for (int i = 0; i < n_items; ++i) {
    const int qty = rng.between(1, 9);
    const long unit = rng.between(500, 90000);
    total += unit * qty;
    lines += rng.pick(kItems) + " " + std::to_string(qty) + " x $" + money(unit) + "\n";
  }

  std::string t;
  t += vendor + "\n" + std::to_string(rng.between(10, 999)) + " Market Street, Springfield\n\n";
  t += "INVOICE\n\nInvoice Number: " + number + "\nInvoice Date: " + long_date(issued) + "\n";
  const std::string terms = "Net " + std::to_string(rng.pick(std::vector<int>{15, 30, 45, 60}));
  if (opts.with_due_date) t += "Due Date: " + (opts.net_terms ? terms : long_date(due)) + "\n";
  t += "Ship Date: " + long_date(shipped) + "\n\nBill To: " + customer + "\n" +
       std::to_string(rng.between(10, 999)) + " Harbor Road, Riverton\n\n";
  t += "Description Qty Price\n" + lines + "\n";
  t += "Total Due: $" + money(total) + "\n\nThank you for your business.\n";
  inv.text = t;

  inv.surface["Invoice Date"] = long_date(issued);
  inv.canonical["Invoice Date"] = iso(issued);
  inv.surface["Invoice From"] = vendor;
  inv.canonical["Invoice From"] = vendor;
  if (opts.with_due_date) {
    inv.surface["Due Date"] = opts.net_terms ? terms : long_date(due);
    inv.canonical["Due Date"] = opts.net_terms ? terms : iso(due);
  } else {
    inv.canonical["Due Date"] = std::nullopt;
  }
  inv.surface["Invoice Amount"] = "$" + money(total);
  inv.canonical["Invoice Amount"] = plain_money(total) + " USD";
  inv.surface["Invoice Number"] = number;
  inv.canonical["Invoice Number"] = number;
  inv.surface["Invoice To"] = customer;
  inv.canonical["Invoice To"] = customer;
  return inv;
}

std::vector<Invoice> make_corpus(std::uint64_t seed, std::size_t n, const InvoiceOptions& opts) {
  std::vector<Invoice> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_invoice(seed, i, opts));
  return out;
}

Document to_document(const Invoice& inv) { return ingest(inv.text, DocumentFormat::Plain, inv.doc_id); }

std::string invoice_profile_json(double t_reject, double t_confident) {
  char th[64];
  std::snprintf(th, sizeof th, "[%.6f, %.6f]", t_reject, t_confident);
  const std::string T = th;
  auto verbs = [&](std::initializer_list<const char*> phrases) {
    std::string s = "{";
    bool first = true;
    for (const char* p : phrases) {
      s += std::string(first ? "" : ", ") + "\"" + p + "\": " + T;
      first = false;
    }
    return s + "}";
  };
  const std::string date_prefixes = R"(["What is the", "When is the", "Which date is the"])";
  std::string j = "{\n  \"defaults\": {\"top_k_passages\": 1, \"boost_factor\": 1.1},\n  \"fields\": [\n";
  j += R"(    {"name": "Invoice Date", "locale": "en-US", "domain": "Finance", "doc_type": "Invoice", "passage_level": "PAGE", "verbiage": )" +
       verbs({"invoice date", "date of issue"}) + ", \"prefixes\": " + date_prefixes +
       R"(, "response_type": "DATE", "policies": [{"type": "NER", "entity": "DATE"}]},)" "\n";
  j += R"(    {"name": "Invoice From", "locale": "en-US", "passage_level": "PAGE", "verbiage": )" +
       verbs({"vendor", "seller"}) +
       R"(, "prefixes": ["Who is the", "What is the name of the"], "response_type": "ENTITY", "policies": [{"type": "NER", "entity": "ORG"}]},)" "\n";
  j += R"(    {"name": "Due Date", "locale": "en-US", "passage_level": "PAGE", "verbiage": )" +
       verbs({"due date", "payment due date"}) + ", \"prefixes\": " + date_prefixes +
       R"(, "response_type": "DATE", "policies": [{"type": "NER", "entity": "DATE"}]},)" "\n";
  j += R"(    {"name": "Invoice Amount", "locale": "en-US", "passage_level": "PAGE", "verbiage": )" +
       verbs({"total amount", "amount due"}) +
       R"(, "prefixes": ["What is the", "How much is the"], "response_type": "MONEY", "policies": [{"type": "NER", "entity": "MONEY"}]},)" "\n";
  j += R"(    {"name": "Invoice Number", "locale": "en-US", "passage_level": "PAGE", "verbiage": )" +
       verbs({"invoice number", "invoice no"}) +
       R"(, "prefixes": ["What is the"], "response_type": "ALPHANUM", "policies": [{"type": "REGEX", "pattern": "^[A-Z]{2,4}-?[0-9]{3,}$"}]},)" "\n";
  j += R"(    {"name": "Invoice To", "locale": "en-US", "passage_level": "PAGE", "verbiage": )" +
       verbs({"customer", "buyer"}) +
       R"(, "prefixes": ["Who is the", "What is the name of the"], "response_type": "ENTITY", "policies": [{"type": "NER", "entity": "ORG"}]})" "\n";
  j += "  ]\n}\n";
  return j;
}

ExtractionProfile invoice_profile(double t_reject, double t_confident) {
  return parse_profile(invoice_profile_json(t_reject, t_confident));
}

std::vector<FieldGoldLabel> gold_labels(const std::vector<Invoice>& corpus) {
  std::vector<FieldGoldLabel> out;
  for (const auto& inv : corpus)
    for (const auto& f : kInvoiceFields) out.push_back({inv.doc_id, f, inv.canonical.at(f)});
  return out;
}

void add_gold(MockSpec& spec, const std::vector<Invoice>& corpus) {
  for (const auto& inv : corpus)
    for (const auto& [field, value] : inv.surface) spec.gold_table[{inv.doc_id, field}] = value;
}

MockSpec mock_spec(std::uint64_t seed, const std::map<QuestionClass, double>& accuracy, double fallback) {
  MockSpec s;
  s.seed = seed;
  s.default_accuracy = fallback;
  for (const auto& [c, a] : accuracy) s.per_class_accuracy[index_of(c)] = a;
  return s;
}

std::vector<QaItem> make_eval_set(std::uint64_t seed, std::size_t per_class) {
  static const std::map<QuestionClass, std::vector<std::string>> templates = {
      {QuestionClass::Date, {"On what date did the {} arrive?", "What date is the {} review?"}},
      {QuestionClass::During, {"During which era was the {} built?"}},
      {QuestionClass::HowAre, {"How are {} usually packed?"}},
      {QuestionClass::HowBigSize, {"How big is the {}?", "What size is the {}?"}},
      {QuestionClass::HowMM, {"How much did the {} cost?", "How many {} were sold?"}},
      {QuestionClass::HowOld, {"How old is the {}?"}},
      {QuestionClass::Undefined, {"Name the {} owner.", "Is the {} ready?"}},
      {QuestionClass::What, {"What is the {} called?", "Which {} was chosen?"}},
      {QuestionClass::WhatTime, {"What time does the {} open?"}},
      {QuestionClass::When, {"When was the {} shipped?"}},
      {QuestionClass::Where, {"Where is the {} stored?"}},
      {QuestionClass::Who, {"Who signed the {}?"}},
      {QuestionClass::Whom, {"To whom was the {} sent?", "Whom did the {} name?"}},
      {QuestionClass::Why, {"Why was the {} delayed?"}},
  };
  static const std::vector<std::string> subjects = {"parcel", "contract", "shipment", "ledger", "order",
                                                     "warehouse", "report", "account", "machine", "invoice"};
  static const std::vector<std::string> answers = {"Harlow", "Maplewood", "Quintero", "Ashby", "Delacroix",
                                                    "Fenwick", "Galloway", "Kestrel", "Lindqvist", "Okafor",
                                                    "Pemberton", "Ravensworth", "Stirling", "Thornbury", "Vance"};
  Rng rng(text::splitmix64(seed ^ 0xA5A5A5A5ULL));
  std::vector<QaItem> out;
  for (const auto c : kAllQuestionClasses) {
    const auto& forms = templates.at(c);
    for (std::size_t i = 0; i < per_class; ++i) {
      const auto& subject = rng.pick(subjects);
      std::string q = rng.pick(forms);
      q.replace(q.find("{}"), 2, subject);
      const auto& gold = rng.pick(answers);
      const auto& other = rng.pick(answers);
      QaItem item;
      item.qclass = c;
      item.record.id = std::string(to_string(c)) + "-" + std::to_string(i);
      item.record.question = q;
      item.record.gold_answers = {gold};
      item.context = "The " + subject + " record lists " + gold + " beside " + other + " and 42 crates.";
      out.push_back(std::move(item));
    }
  }
  return out;
}

ModelPredictions predict(const std::string& model, MockSpec spec, const std::vector<QaItem>& items) {
  ModelPredictions p;
  p.model = model;
  for (const auto& it : items) spec.gold_table[{it.record.id, "qa"}] = it.record.gold_answers.front();
  for (const auto& it : items) {
    QaRequest req{it.record.question, it.qclass, it.record.id, it.context, "qa"};
    p.answers[it.record.id] = mock_answer(spec, model, req).answer_text;
  }
  return p;
}

ClassWeightTable calibrate_mocks(std::uint64_t seed, const std::vector<std::pair<std::string, MockSpec>>& models,
                                 std::size_t per_class) {
  const auto items = make_eval_set(seed, per_class);
  std::vector<QaEvalRecord> eval;
  for (const auto& it : items) eval.push_back(it.record);
  std::vector<ModelPredictions> preds;
  for (const auto& [name, spec] : models) preds.push_back(predict(name, spec, items));
  return calibrate_weights(eval, preds);
}

}  // namespace vespa::synth
