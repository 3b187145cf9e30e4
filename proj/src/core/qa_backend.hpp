#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/question.hpp"

namespace vespa {

struct QaRequest {
  std::string question_text;
  QuestionClass question_class = QuestionClass::Undefined;
  std::string passage_id;
  std::string passage_text;
  /// Routing metadata for test doubles; never sent over the wire.
  std::string field_name;
};

/// Span offsets are byte offsets into the passage text ([start, end)).
struct QaResponse {
  std::string answer_text;
  std::optional<std::pair<std::size_t, std::size_t>> span;
  double raw_confidence = 0.0;
  /// Set when a remote score fell outside [0,1] and was clamped.
  bool clamped = false;
  /// Protocol irregularities observed while decoding a remote reply.
  std::string note;

  bool abstained() const { return answer_text.empty(); }
  bool operator==(const QaResponse&) const = default;
};

struct ConfidenceBand {
  double lo = 0.0;
  double hi = 1.0;
};

enum class AbsentPolicy { Abstain, Distract };
enum class DistractorKind { Any, Numeric, Word };

/// Deterministic stand-in for a QA model. Gold answers are keyed by
/// (scope, field) where scope is a passage id, a document id or "*".
struct MockSpec {
  std::uint64_t seed = 0;
  std::array<std::optional<double>, kQuestionClassCount> per_class_accuracy{};
  double default_accuracy = 0.0;
  std::map<std::pair<std::string, std::string>, std::string> gold_table;
  ConfidenceBand correct{0.8, 1.0};
  ConfidenceBand wrong{0.0, 0.4};
  /// Behavior when no gold answer occurs in the passage.
  AbsentPolicy absent_policy = AbsentPolicy::Abstain;
  /// Distractor type to use for a field whose gold is unknown.
  std::map<std::string, DistractorKind> distractor_kinds;

  double accuracy(QuestionClass c) const;
  const std::string* gold_for(std::string_view passage_id, std::string_view field) const;
};

/// Throws ConfigError when bands or accuracies are out of range or the bands
/// overlap (correct.lo must be >= wrong.hi).
void validate_mock_spec(const MockSpec& spec);

/// Counter-based draw keyed by (seed, backend, passage id, question text).
QaResponse mock_answer(const MockSpec& spec, std::string_view backend_name, const QaRequest& req);

enum class BackendKind { Mock, Remote };

struct BackendDescriptor {
  std::string name;
  BackendKind kind = BackendKind::Mock;
  std::string endpoint;
  std::chrono::milliseconds timeout{10000};
  int max_retries = 2;
  int max_in_flight = 4;
  std::chrono::milliseconds backoff_base{100};
  std::optional<MockSpec> mock;
};

/// A black-box extractive QA model.
class QaBackend {
public:
  virtual ~QaBackend() = default;
  virtual const std::string& name() const = 0;
  /// Throws BackendUnavailable on transport failure after retries.
  virtual QaResponse ask(const QaRequest& req) const = 0;
};

class MockBackend final : public QaBackend {
public:
  MockBackend(std::string name, MockSpec spec);
  const std::string& name() const override { return name_; }
  QaResponse ask(const QaRequest& req) const override { return mock_answer(spec_, name_, req); }
  const MockSpec& spec() const { return spec_; }

private:
  std::string name_;
  MockSpec spec_;
};

/// HTTP client for the `/answer` wire protocol.
class RemoteBackend final : public QaBackend {
public:
  explicit RemoteBackend(BackendDescriptor desc);
  const std::string& name() const override { return desc_.name; }
  QaResponse ask(const QaRequest& req) const override;
  bool healthy() const;

private:
  BackendDescriptor desc_;
  std::string host_;
  int port_ = 80;
  std::string base_path_;
};

std::unique_ptr<QaBackend> make_backend(const BackendDescriptor& desc);

/// ask() through a descriptor; constructs the backend on each call.
QaResponse ask(const BackendDescriptor& desc, const QaRequest& req);

// Wire protocol helpers.
std::string serialize_wire_request(const QaRequest& req);
/// Decodes a wire reply against the passage it was asked on. Offsets on the
/// wire count Unicode code points; the result carries byte offsets.
QaResponse parse_wire_response(std::string_view body, std::string_view passage_text);

std::size_t codepoint_to_byte_offset(std::string_view utf8, std::size_t cp);

}  // namespace vespa
