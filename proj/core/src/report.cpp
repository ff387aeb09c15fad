#include <charconv>
#include <string>

#include "holdp/eval.hpp"
#include "json.hpp"

namespace holdp {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const EvalReport* find_report(std::span<const EvalReport> reports, const DescriptorConfig& config) {
  const std::string fp = config.fingerprint();
  for (const auto& r : reports) {
    if (r.config.fingerprint() == fp) return &r;
  }
  return nullptr;
}

}  // namespace

std::string report_json(std::span<const EvalReport> reports, const SplitSpec& spec,
                        const std::string& dataset_name, bool include_timing) {
  using nlohmann::ordered_json;
  ordered_json split;
  if (spec.train_count) {
    split["train_count"] = *spec.train_count;
  } else {
    split["train_fraction"] = spec.train_fraction;
  }
  split["repeats"] = spec.repeats;
  split["seed"] = spec.seed;

  ordered_json results = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json item;
    item["label"] = r.config.label();
    item["descriptor"] = std::string(to_string(r.config.kind));
    item["fingerprint"] = r.config.fingerprint();
    item["vector_length"] = r.config.vector_length();
    item["accuracies"] = r.accuracies;
    item["mean"] = r.mean;
    item["std"] = r.stddev;
    if (include_timing) item["wall_seconds"] = r.wall_seconds;
    results.push_back(std::move(item));
  }

  ordered_json doc;
  doc["dataset"] = dataset_name;
  doc["classifier"] = "chi-square 1-NN";
  doc["split"] = std::move(split);
  doc["results"] = std::move(results);
  return doc.dump(2) + "\n";
}

std::string sweep_table_csv(std::span<const EvalReport> reports, const SweepSpec& sweep) {
  std::string out = "order";
  for (const int t : sweep.t_values) out += ",t=" + std::to_string(t);
  if (sweep.adaptive) out += ",adaptive";
  out += '\n';
  auto cell = [&](const DescriptorConfig& c) {
    const EvalReport* r = find_report(reports, c);
    return r ? format_double(r->mean) : std::string();
  };
  for (const int n : sweep.orders) {
    out += std::to_string(n);
    for (const int t : sweep.t_values) {
      out += ',' + cell(DescriptorConfig::holdp(n, t, sweep.norm, sweep.source));
    }
    if (sweep.adaptive) out += ',' + cell(DescriptorConfig::aholdp(n, sweep.norm, sweep.source));
    out += '\n';
  }
  return out;
}

}  // namespace holdp
