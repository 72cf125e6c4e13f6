#include "segloss/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "segloss/io.hpp"
#include "segloss/losses.hpp"

namespace segloss {

bool EvalReport::any_error() const {
  return std::any_of(pairs.begin(), pairs.end(),
                     [](const PairResult& p) { return p.error.has_value(); });
}

EvalReport evaluate_pairs(
    const std::vector<std::pair<std::filesystem::path, std::filesystem::path>>& pairs,
    const std::map<std::string, LossSpec>& specs, double threshold) {
  EvalReport report;
  report.config_losses = specs;
  report.threshold = threshold;
  for (const auto& [pred_path, truth_path] : pairs) {
    PairResult result;
    result.pred = pred_path.string();
    result.truth = truth_path.string();
    try {
      const ProbField p = read_prediction(pred_path);
      const MaskField y = read_truth(truth_path);
      require_same_shape(p, y);
      for (const auto& [key, spec] : specs) {
        const LossResult r = evaluate_loss(spec, p, y);
        result.losses[key] = r.value;
        if (r.degenerate) result.flags.push_back(key + ":degenerate");
      }
      result.metrics = metric_report(confusion(p, y, threshold));
      std::sort(result.flags.begin(), result.flags.end());
    } catch (const Error& e) {
      result.losses.clear();
      result.flags.clear();
      result.metrics = {};
      result.error = e.what();
    }
    report.pairs.push_back(std::move(result));
  }
  return report;
}

namespace {

using detail::format_double;

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Minimal writer for the fixed report schema; keys are emitted pre-sorted.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out) : out_(out) {}

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& name) {
    comma();
    indent();
    out_ << '"' << json_escape(name) << "\": ";
    pending_value_ = true;
  }

  void value_string(const std::string& v) { scalar('"' + json_escape(v) + '"'); }
  void value_double(double v) { scalar(format_double(v)); }
  void value_int(std::int64_t v) { scalar(std::to_string(v)); }
  void value_null() { scalar("null"); }
  void value_optional(const std::optional<double>& v) {
    v.has_value() ? value_double(*v) : value_null();
  }

  void finish() { out_ << '\n'; }

 private:
  void open(char c) {
    if (!pending_value_) {
      comma();
      indent();
    }
    pending_value_ = false;
    out_ << c;
    first_.push_back(true);
  }
  void close(char c) {
    const bool was_empty = first_.back();
    first_.pop_back();
    if (!was_empty) {
      out_ << '\n';
      indent();
    }
    out_ << c;
  }
  void scalar(const std::string& text) {
    if (!pending_value_) {
      comma();
      indent();
    }
    pending_value_ = false;
    out_ << text;
  }
  void comma() {
    if (first_.empty()) return;
    if (!first_.back()) out_ << ',';
    first_.back() = false;
    out_ << '\n';
  }
  void indent() {
    for (std::size_t i = 0; i < first_.size(); ++i) out_ << "  ";
  }

  std::ostream& out_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

struct MetricColumn {
  const char* name;
  std::optional<double> MetricReport::* member;
};

constexpr MetricColumn kMetricColumns[] = {
    {"dice", &MetricReport::dice},
    {"precision", &MetricReport::precision},
    {"recall", &MetricReport::recall},
    {"specificity", &MetricReport::specificity},
};

}  // namespace

void write_report_json(const EvalReport& report, std::ostream& out) {
  JsonWriter w(out);
  w.begin_object();

  w.key("aggregate");
  w.begin_object();
  w.key("losses");
  w.begin_object();
  for (const auto& [key, spec] : report.config_losses) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (const PairResult& pair : report.pairs) {
      if (pair.error) continue;
      sum += pair.losses.at(key);
      ++count;
    }
    w.key(key);
    count > 0 ? w.value_double(sum / static_cast<double>(count)) : w.value_null();
  }
  w.end_object();
  w.key("metrics");
  w.begin_object();
  for (const MetricColumn& column : kMetricColumns) {
    double sum = 0.0;
    std::int64_t defined = 0;
    std::int64_t undefined = 0;
    for (const PairResult& pair : report.pairs) {
      if (pair.error) continue;
      const std::optional<double>& v = pair.metrics.*column.member;
      if (v.has_value()) {
        sum += *v;
        ++defined;
      } else {
        ++undefined;
      }
    }
    w.key(column.name);
    w.begin_object();
    w.key("mean");
    defined > 0 ? w.value_double(sum / static_cast<double>(defined))
                : w.value_null();
    w.key("undefined_count");
    w.value_int(undefined);
    w.end_object();
  }
  w.end_object();
  w.end_object();

  w.key("config");
  w.begin_object();
  w.key("losses");
  w.begin_object();
  for (const auto& [key, spec] : report.config_losses) {
    w.key(key);
    w.begin_object();
    w.key("name");
    w.value_string(spec.name);
    w.key("params");
    w.begin_object();
    for (const auto& [param, value] : spec.params) {
      w.key(param);
      w.value_double(value);
    }
    w.end_object();
    w.end_object();
  }
  w.end_object();
  w.key("threshold");
  w.value_double(report.threshold);
  w.end_object();

  w.key("pairs");
  w.begin_array();
  for (const PairResult& pair : report.pairs) {
    w.begin_object();
    if (pair.error) {
      w.key("error");
      w.value_string(*pair.error);
    } else {
      w.key("flags");
      w.begin_array();
      for (const std::string& flag : pair.flags) w.value_string(flag);
      w.end_array();
      w.key("losses");
      w.begin_object();
      for (const auto& [key, value] : pair.losses) {
        w.key(key);
        w.value_double(value);
      }
      w.end_object();
      w.key("metrics");
      w.begin_object();
      for (const MetricColumn& column : kMetricColumns) {
        w.key(column.name);
        w.value_optional(pair.metrics.*column.member);
      }
      w.end_object();
    }
    w.key("pred");
    w.value_string(pair.pred);
    w.key("truth");
    w.value_string(pair.truth);
    w.end_object();
  }
  w.end_array();

  w.end_object();
  w.finish();
}

void write_report_json(const EvalReport& report,
                       const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_report_json(report, buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw_error(ErrorCode::IoError,
                "cannot open " + path.string() + " for writing");
  }
  out << buffer.str();
  out.flush();
  if (!out) {
    throw_error(ErrorCode::IoError, "write failed on " + path.string());
  }
}

}  // namespace segloss
