#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

#include "holdp/errors.hpp"
#include "holdp/features.hpp"

namespace holdp {

namespace {

constexpr char kMagic[8] = {'H', 'O', 'L', 'D', 'P', 'F', 'V', '\0'};
constexpr std::uint32_t kVersion = 1;
constexpr std::string_view kCsvTag = "# holdp-features";

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t k = 0; k < sizeof(U); ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xff));
}

class ByteReader {
 public:
  ByteReader(const std::string& bytes, const std::string& name) : bytes_(bytes), name_(name) {}

  template <typename T>
  T get_le() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    need(sizeof(U));
    U bits = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k) {
      bits |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + k])) << (8 * k);
    }
    pos_ += sizeof(U);
    return std::bit_cast<T>(bits);
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError(name_ + ": truncated feature file");
  }

  const std::string& bytes_;
  const std::string& name_;
  std::size_t pos_ = 0;
};

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Splits one CSV line; only the first field may be quoted in practice, but
// any field is accepted.
std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

void check_expected(const DescriptorConfig& found, const std::optional<DescriptorConfig>& expected,
                    const std::string& name) {
  if (expected && expected->fingerprint() != found.fingerprint()) {
    throw FormatError(name + ": feature file was produced with '" + found.fingerprint() +
                      "', expected '" + expected->fingerprint() + "'");
  }
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

FeatureSet load_binary(const std::string& bytes, const std::string& name) {
  ByteReader r(bytes, name);
  r.get_string(sizeof kMagic);
  const auto version = r.get_le<std::uint32_t>();
  if (version != kVersion) {
    throw FormatError(name + ": unsupported feature file version " + std::to_string(version));
  }
  const auto kind_id = r.get_le<std::uint32_t>();
  const auto fp_len = r.get_le<std::uint32_t>();
  FeatureSet set;
  set.config = DescriptorConfig::from_fingerprint(r.get_string(fp_len));
  if (kind_id != static_cast<std::uint32_t>(set.config.kind)) {
    throw FormatError(name + ": descriptor id does not match fingerprint");
  }
  const auto length = r.get_le<std::uint64_t>();
  const auto count = r.get_le<std::uint64_t>();
  if (length != set.config.vector_length()) {
    throw FormatError(name + ": vector length " + std::to_string(length) +
                      " does not match fingerprint");
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    FeatureRecord rec;
    rec.label = r.get_string(r.get_le<std::uint32_t>());
    rec.values.resize(length);
    for (double& v : rec.values) v = r.get_le<double>();
    set.records.push_back(std::move(rec));
  }
  if (!r.at_end()) throw FormatError(name + ": trailing bytes after records");
  return set;
}

FeatureSet load_csv(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> header;
  std::getline(in, line);
  if (line.rfind(kCsvTag, 0) != 0) throw FormatError(name + ": missing feature CSV tag");
  if (line != std::string(kCsvTag) + ",version=" + std::to_string(kVersion)) {
    throw FormatError(name + ": unsupported feature CSV version");
  }
  while (in.peek() == '#') {
    std::getline(in, line);
    const auto eq = line.find('=');
    if (line.size() < 2 || eq == std::string::npos) throw FormatError(name + ": bad header line");
    header[line.substr(2, eq - 2)] = line.substr(eq + 1);
  }
  for (const char* key : {"descriptor", "fingerprint", "length", "count"}) {
    if (!header.contains(key)) throw FormatError(name + ": missing header '" + key + "'");
  }
  FeatureSet set;
  set.config = DescriptorConfig::from_fingerprint(header["fingerprint"]);
  if (header["descriptor"] != to_string(set.config.kind)) {
    throw FormatError(name + ": descriptor does not match fingerprint");
  }
  const std::size_t length = std::stoull(header["length"]);
  const std::size_t count = std::stoull(header["count"]);
  if (length != set.config.vector_length()) {
    throw FormatError(name + ": vector length does not match fingerprint");
  }
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = csv_split(line);
    if (fields.size() != length + 1) throw FormatError(name + ": wrong field count in record");
    FeatureRecord rec;
    rec.label = std::move(fields[0]);
    rec.values.resize(length);
    for (std::size_t k = 0; k < length; ++k) {
      const std::string& f = fields[k + 1];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), rec.values[k]);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
        throw FormatError(name + ": bad number '" + f + "'");
      }
    }
    set.records.push_back(std::move(rec));
  }
  if (set.records.size() != count) throw FormatError(name + ": record count does not match header");
  return set;
}

}  // namespace

void FeatureSet::validate() const {
  const std::size_t length = config.vector_length();
  for (const auto& rec : records) {
    if (rec.values.size() != length) {
      throw FormatError("record '" + rec.label + "' has length " +
                        std::to_string(rec.values.size()) + ", expected " +
                        std::to_string(length));
    }
  }
}

FeatureFormat feature_format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? FeatureFormat::Csv : FeatureFormat::Binary;
}

void save_features(const std::filesystem::path& path, const FeatureSet& set, FeatureFormat format) {
  set.validate();
  const std::string fp = set.config.fingerprint();
  const std::size_t length = set.config.vector_length();
  std::string out;

  if (format == FeatureFormat::Binary) {
    out.append(kMagic, sizeof kMagic);
    put_le(out, kVersion);
    put_le(out, static_cast<std::uint32_t>(set.config.kind));
    put_le(out, static_cast<std::uint32_t>(fp.size()));
    out += fp;
    put_le(out, static_cast<std::uint64_t>(length));
    put_le(out, static_cast<std::uint64_t>(set.records.size()));
    for (const auto& rec : set.records) {
      put_le(out, static_cast<std::uint32_t>(rec.label.size()));
      out += rec.label;
      for (const double v : rec.values) put_le(out, v);
    }
  } else {
    out += std::string(kCsvTag) + ",version=" + std::to_string(kVersion) + "\n";
    out += "# descriptor=" + std::string(to_string(set.config.kind)) + "\n";
    out += "# fingerprint=" + fp + "\n";
    out += "# length=" + std::to_string(length) + "\n";
    out += "# count=" + std::to_string(set.records.size()) + "\n";
    out += "label";
    for (std::size_t k = 0; k < length; ++k) out += ",f" + std::to_string(k);
    out += '\n';
    char buf[64];
    for (const auto& rec : set.records) {
      out += csv_quote(rec.label);
      for (const double v : rec.values) {
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        out += ',';
        out.append(buf, res.ptr);
      }
      out += '\n';
    }
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for writing: " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed: " + path.string());
}

FeatureSet load_features(const std::filesystem::path& path,
                         const std::optional<DescriptorConfig>& expected) {
  const std::string bytes = read_all(path);
  const std::string name = path.string();
  FeatureSet set;
  if (bytes.size() >= sizeof kMagic && std::memcmp(bytes.data(), kMagic, sizeof kMagic) == 0) {
    set = load_binary(bytes, name);
  } else if (bytes.rfind(kCsvTag, 0) == 0) {
    set = load_csv(bytes, name);
  } else {
    throw FormatError(name + ": not a holdp feature file");
  }
  check_expected(set.config, expected, name);
  return set;
}

}  // namespace holdp
