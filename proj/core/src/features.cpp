#include "holdp/features.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <string>

#include "holdp/errors.hpp"

namespace holdp {

std::string_view to_string(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::LBP: return "LBP";
    case DescriptorKind::LTP: return "LTP";
    case DescriptorKind::LDP: return "LDP";
    case DescriptorKind::HOLDP: return "HOLDP";
    case DescriptorKind::AHOLDP: return "AHOLDP";
  }
  return "?";
}

DescriptorKind parse_descriptor_kind(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto kind : {DescriptorKind::LBP, DescriptorKind::LTP, DescriptorKind::LDP,
                    DescriptorKind::HOLDP, DescriptorKind::AHOLDP}) {
    if (upper == to_string(kind)) return kind;
  }
  throw ArgumentError("unknown descriptor '" + std::string(text) + "'");
}

std::string_view to_string(Normalization norm) {
  return norm == Normalization::L1 ? "l1" : "raw";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "l1") return Normalization::L1;
  if (text == "raw") return Normalization::Raw;
  throw ArgumentError("unknown normalization '" + std::string(text) + "'");
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw FormatError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

double parse_double(std::string_view text, std::string_view what) {
  double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw FormatError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

DescriptorConfig DescriptorConfig::lbp(Normalization norm) {
  DescriptorConfig c;
  c.kind = DescriptorKind::LBP;
  c.norm = norm;
  return c;
}

DescriptorConfig DescriptorConfig::ltp(double tau, Normalization norm) {
  DescriptorConfig c;
  c.kind = DescriptorKind::LTP;
  c.tau = tau;
  c.norm = norm;
  return c;
}

DescriptorConfig DescriptorConfig::ldp(int t, Normalization norm) {
  DescriptorConfig c;
  c.kind = DescriptorKind::LDP;
  c.t = t;
  c.norm = norm;
  return c;
}

DescriptorConfig DescriptorConfig::holdp(int order, int t, Normalization norm,
                                         ResponseSource source) {
  DescriptorConfig c;
  c.kind = DescriptorKind::HOLDP;
  c.order = order;
  c.t = t;
  c.norm = norm;
  c.source = source;
  return c;
}

DescriptorConfig DescriptorConfig::aholdp(int order, Normalization norm, ResponseSource source) {
  DescriptorConfig c;
  c.kind = DescriptorKind::AHOLDP;
  c.order = order;
  c.norm = norm;
  c.source = source;
  return c;
}

void DescriptorConfig::validate() const {
  switch (kind) {
    case DescriptorKind::LBP:
      break;
    case DescriptorKind::LTP:
      if (!(tau >= 0.0)) throw ArgumentError("tau must be >= 0");
      break;
    case DescriptorKind::LDP:
    case DescriptorKind::HOLDP:
    case DescriptorKind::AHOLDP:
      code_config().validate();
      break;
  }
}

CodeConfig DescriptorConfig::code_config() const {
  CodeConfig c;
  c.order = kind == DescriptorKind::LDP ? 1 : order;
  c.mode = kind == DescriptorKind::AHOLDP ? ThresholdMode::AdaptiveMedian : ThresholdMode::Prominent;
  c.t = t;
  c.source = kind == DescriptorKind::LDP ? ResponseSource::PerDirectionPlane : source;
  return c;
}

std::size_t DescriptorConfig::vector_length() const {
  switch (kind) {
    case DescriptorKind::LBP:
    case DescriptorKind::LDP:
      return kBins;
    case DescriptorKind::LTP:
      return 2 * kBins;
    case DescriptorKind::HOLDP:
    case DescriptorKind::AHOLDP:
      return static_cast<std::size_t>(order) * kBins;
  }
  return 0;
}

std::string DescriptorConfig::fingerprint() const {
  std::string out(to_string(kind));
  switch (kind) {
    case DescriptorKind::LBP:
      break;
    case DescriptorKind::LTP:
      out += ";tau=" + format_double(tau);
      break;
    case DescriptorKind::LDP:
      out += ";t=" + std::to_string(t);
      break;
    case DescriptorKind::HOLDP:
      out += ";order=" + std::to_string(order) + ";t=" + std::to_string(t) +
             ";source=" + std::string(to_string(source));
      break;
    case DescriptorKind::AHOLDP:
      out += ";order=" + std::to_string(order) + ";source=" + std::string(to_string(source));
      break;
  }
  out += ";norm=" + std::string(to_string(norm));
  return out;
}

DescriptorConfig DescriptorConfig::from_fingerprint(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (parts.empty()) throw FormatError("empty fingerprint");

  DescriptorConfig c;
  try {
    c.kind = parse_descriptor_kind(parts[0]);
  } catch (const ArgumentError& e) {
    throw FormatError(e.what());
  }
  std::map<std::string_view, std::string_view> fields;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const std::size_t eq = parts[k].find('=');
    if (eq == std::string_view::npos) throw FormatError("bad fingerprint field in '" + std::string(text) + "'");
    fields[parts[k].substr(0, eq)] = parts[k].substr(eq + 1);
  }
  try {
    if (auto it = fields.find("order"); it != fields.end()) c.order = parse_int(it->second, "order");
    if (auto it = fields.find("t"); it != fields.end()) c.t = parse_int(it->second, "t");
    if (auto it = fields.find("tau"); it != fields.end()) c.tau = parse_double(it->second, "tau");
    if (auto it = fields.find("source"); it != fields.end()) c.source = parse_response_source(it->second);
    if (auto it = fields.find("norm"); it != fields.end()) c.norm = parse_normalization(it->second);
    c.validate();
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("bad fingerprint: ") + e.what());
  }
  if (c.fingerprint() != text) throw FormatError("non-canonical fingerprint '" + std::string(text) + "'");
  return c;
}

std::string DescriptorConfig::label() const {
  switch (kind) {
    case DescriptorKind::LBP: return "LBP";
    case DescriptorKind::LTP: return "LTP_tau" + format_double(tau);
    case DescriptorKind::LDP: return "LDP_t" + std::to_string(t);
    case DescriptorKind::HOLDP: return "HOLDP" + std::to_string(order) + "_t" + std::to_string(t);
    case DescriptorKind::AHOLDP: return "AHOLDP" + std::to_string(order);
  }
  return "?";
}

double LayerHistogram::total() const { return std::accumulate(bins.begin(), bins.end(), 0.0); }

LayerHistogram histogram(const PatternMap& map) {
  LayerHistogram h;
  h.layer = map.layer;
  for (const std::uint8_t code : map.codes) h.bins[code] += 1.0;
  return h;
}

namespace {

void append(std::vector<double>& out, const LayerHistogram& h, Normalization norm) {
  const double scale = norm == Normalization::L1 && h.total() > 0.0 ? 1.0 / h.total() : 1.0;
  for (const double b : h.bins) out.push_back(b * scale);
}

}  // namespace

FeatureVector extract_descriptor(const GrayImage& img, const CodeConfig& config,
                                 Normalization norm) {
  FeatureVector fv;
  fv.config = config.mode == ThresholdMode::Prominent
                  ? DescriptorConfig::holdp(config.order, config.t, norm, config.source)
                  : DescriptorConfig::aholdp(config.order, norm, config.source);
  const auto maps = encode_pattern_maps(img, config);
  fv.values.reserve(maps.size() * kBins);
  for (const auto& map : maps) append(fv.values, histogram(map), norm);
  return fv;
}

FeatureVector extract(const GrayImage& img, const DescriptorConfig& config) {
  config.validate();
  FeatureVector fv;
  switch (config.kind) {
    case DescriptorKind::LBP:
      append(fv.values, histogram(lbp_map(img)), config.norm);
      break;
    case DescriptorKind::LTP: {
      const auto [pos, neg] = ltp_maps(img, config.tau);
      append(fv.values, histogram(pos), config.norm);
      append(fv.values, histogram(neg), config.norm);
      break;
    }
    case DescriptorKind::LDP:
    case DescriptorKind::HOLDP:
    case DescriptorKind::AHOLDP:
      fv.values = extract_descriptor(img, config.code_config(), config.norm).values;
      break;
  }
  fv.config = config;
  return fv;
}

}  // namespace holdp
