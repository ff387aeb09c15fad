#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holdp/holdp.hpp"

namespace holdp::cli {

namespace {

struct ResizeOption {
  std::string text = "64x64";

  std::optional<ResizePolicy> policy() const {
    if (text == "none" || text == "off") return std::nullopt;
    const auto x = text.find('x');
    ResizePolicy p;
    try {
      if (x == std::string::npos) throw std::invalid_argument(text);
      std::size_t used = 0;
      p.target_width = std::stoi(text.substr(0, x), &used);
      if (used != x) throw std::invalid_argument(text);
      p.target_height = std::stoi(text.substr(x + 1), &used);
      if (used != text.size() - x - 1) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ArgumentError("--resize expects WxH or 'none', got '" + text + "'");
    }
    if (p.target_width < 1 || p.target_height < 1) throw ArgumentError("--resize targets must be >= 1");
    return p;
  }
};

struct DescriptorOptions {
  std::string descriptor = "holdp";
  int order = 1;
  int t = 3;
  bool adaptive = false;
  double tau = 2.0;
  std::string source = "per-direction";
  std::string norm = "l1";

  void add_to(CLI::App& app) {
    app.add_option("--descriptor", descriptor, "lbp, ltp, ldp, holdp or aholdp")
        ->capture_default_str();
    app.add_option("--order", order, "HOLDP order n (layers 1..n)")->capture_default_str();
    auto* t_opt = app.add_option("--t", t, "number of prominent directions")->capture_default_str();
    auto* adaptive_opt = app.add_flag("--adaptive", adaptive, "median threshold (AHOLDP)");
    t_opt->excludes(adaptive_opt);
    app.add_option("--tau", tau, "LTP dead-zone half width")->capture_default_str();
    app.add_option("--source", source, "ring sample source: per-direction or max")
        ->capture_default_str();
    app.add_option("--norm", norm, "histogram normalization: l1 or raw")->capture_default_str();
  }

  DescriptorConfig config() const {
    DescriptorConfig c;
    c.kind = parse_descriptor_kind(descriptor);
    if (adaptive) {
      if (c.kind != DescriptorKind::HOLDP && c.kind != DescriptorKind::AHOLDP) {
        throw ArgumentError("--adaptive only applies to holdp");
      }
      c.kind = DescriptorKind::AHOLDP;
    }
    c.order = order;
    c.t = t;
    c.tau = tau;
    c.source = parse_response_source(source);
    c.norm = parse_normalization(norm);
    c.validate();
    return c;
  }
};

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw ArgumentError(flag + ": bad integer '" + s + "'");
    }
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const int lo = to_int(item.substr(0, dash));
      const int hi = to_int(item.substr(dash + 1));
      if (hi < lo) throw ArgumentError(flag + ": empty range '" + item + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(to_int(item));
    }
  }
  if (out.empty()) throw ArgumentError(flag + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  if (text == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
      throw ArgumentError(flag + ": bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

GrayImage load_and_resize(const std::filesystem::path& path,
                          const std::optional<ResizePolicy>& policy) {
  GrayImage img = load_image(path);
  return policy ? resize(img, *policy) : img;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create directory " + dir.string());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

GrayImage map_to_image(const PatternMap& map) {
  GrayImage img(map.width, map.height);
  for (std::size_t k = 0; k < map.codes.size(); ++k) img.pixels()[k] = map.codes[k];
  return img;
}

// Shared affine rescale over all planes: zero response maps to mid-gray.
std::vector<GrayImage> rescale_planes(const ResponseStack& stack) {
  double max_abs = 0.0;
  for (int d = 0; d < kDirections; ++d) {
    for (const double v : stack.plane(d)) max_abs = std::max(max_abs, std::abs(v));
  }
  std::vector<GrayImage> planes;
  for (int d = 0; d < kDirections; ++d) {
    GrayImage img(stack.width(), stack.height());
    const auto src = stack.plane(d);
    for (std::size_t k = 0; k < src.size(); ++k) {
      img.pixels()[k] = max_abs > 0.0 ? 127.5 + 127.5 * src[k] / max_abs : 127.5;
    }
    planes.push_back(std::move(img));
  }
  return planes;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local directional pattern descriptors (LBP, LTP, LDP, HOLDP, AHOLDP)", "holdp"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // filter
  auto* filter = app.add_subcommand("filter", "write the eight Kirsch response planes as PGM");
  std::string filter_input;
  std::string filter_out;
  ResizeOption filter_resize;
  filter->add_option("--input,-i", filter_input, "input image (PGM or PNG)")->required();
  filter->add_option("--out-dir,-o", filter_out, "output directory")->required();
  filter->add_option("--resize", filter_resize.text, "WxH or none")->capture_default_str();

  // pattern-map
  auto* pmap = app.add_subcommand("pattern-map", "write per-layer code maps as PGM");
  std::string pmap_input;
  std::string pmap_out;
  ResizeOption pmap_resize;
  DescriptorOptions pmap_desc;
  pmap->add_option("--input,-i", pmap_input, "input image")->required();
  pmap->add_option("--out-dir,-o", pmap_out, "output directory")->required();
  pmap->add_option("--resize", pmap_resize.text, "WxH or none")->capture_default_str();
  pmap_desc.add_to(*pmap);

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "extract one descriptor per manifest entry");
  std::string ex_manifest;
  std::string ex_out;
  std::string ex_format = "auto";
  ResizeOption ex_resize;
  DescriptorOptions ex_desc;
  extract_cmd->add_option("--manifest,-m", ex_manifest, "CSV manifest path,label")->required();
  extract_cmd->add_option("--out,-o", ex_out, "feature file")->required();
  extract_cmd->add_option("--format", ex_format, "auto (by extension), bin or csv")
      ->capture_default_str();
  extract_cmd->add_option("--resize", ex_resize.text, "WxH or none")->capture_default_str();
  extract_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  ex_desc.add_to(*extract_cmd);

  // bench
  auto* bench = app.add_subcommand("bench", "repeated random-split 1-NN evaluation sweep");
  std::string b_manifest;
  std::string b_json;
  std::string b_csv;
  double b_train_fraction = 0.5;
  std::optional<int> b_train_count;
  int b_repeats = 10;
  std::uint64_t b_seed = 0;
  std::string b_orders = "1-4";
  std::string b_t_values = "2-6";
  bool b_no_adaptive = false;
  std::string b_baselines = "lbp,ldp,ltp";
  std::string b_taus = "2,5";
  int b_ldp_t = 3;
  std::string b_source = "per-direction";
  std::string b_norm = "l1";
  bool b_timing = false;
  ResizeOption b_resize;
  bench->add_option("--manifest,-m", b_manifest, "CSV manifest path,label")->required();
  bench->add_option("--out-json", b_json, "report JSON path")->required();
  bench->add_option("--out-csv", b_csv, "sweep table CSV path");
  auto* frac_opt =
      bench->add_option("--train", b_train_fraction, "training fraction per subject")
          ->capture_default_str();
  bench->add_option("--train-count", b_train_count, "training images per subject")
      ->excludes(frac_opt);
  bench->add_option("--repeats", b_repeats, "random splits")->capture_default_str();
  bench->add_option("--seed", b_seed, "split seed")->capture_default_str();
  bench->add_option("--orders", b_orders, "orders, e.g. 1-4 or 1,3")->capture_default_str();
  bench->add_option("--t-list", b_t_values, "t values, e.g. 2-6")->capture_default_str();
  bench->add_flag("--no-adaptive", b_no_adaptive, "skip the AHOLDP column");
  bench->add_option("--baselines", b_baselines, "subset of lbp,ldp,ltp or none")
      ->capture_default_str();
  bench->add_option("--tau-list", b_taus, "LTP tau values or none")->capture_default_str();
  bench->add_option("--ldp-t", b_ldp_t, "t for the LDP baseline")->capture_default_str();
  bench->add_option("--source", b_source, "per-direction or max")->capture_default_str();
  bench->add_option("--norm", b_norm, "l1 or raw")->capture_default_str();
  bench->add_flag("--timing", b_timing, "include wall times in the JSON report");
  bench->add_option("--resize", b_resize.text, "WxH or none")->capture_default_str();
  bench->add_option("--threads", threads, "worker threads (0 = all cores)");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a procedural texture dataset");
  SynthSpec s_spec;
  std::string s_out;
  bool s_no_jitter = false;
  synth->add_option("--classes", s_spec.classes, "number of classes")->capture_default_str();
  synth->add_option("--per-class", s_spec.images_per_class, "images per class")
      ->capture_default_str();
  synth->add_option("--size", s_spec.size, "image side length")->capture_default_str();
  synth->add_option("--seed", s_spec.seed, "generator seed")->capture_default_str();
  synth->add_option("--out-dir,-o", s_out, "output directory")->required();
  synth->add_flag("--no-jitter", s_no_jitter, "disable per-image gain/offset jitter");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("holdp");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "holdp: " << e.what() << "\n";
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (*filter) {
      const auto policy = filter_resize.policy();
      const GrayImage img = load_and_resize(filter_input, policy);
      ensure_dir(filter_out);
      const auto planes = rescale_planes(kirsch_filter(img));
      for (int d = 0; d < kDirections; ++d) {
        save_pgm(planes[static_cast<std::size_t>(d)],
                 std::filesystem::path(filter_out) / ("plane_" + std::to_string(d) + ".pgm"));
      }
      return 0;
    }

    if (*pmap) {
      const auto policy = pmap_resize.policy();
      const DescriptorConfig config = pmap_desc.config();
      const GrayImage img = load_and_resize(pmap_input, policy);
      std::vector<std::pair<std::string, PatternMap>> maps;
      switch (config.kind) {
        case DescriptorKind::LBP:
          maps.emplace_back("lbp", lbp_map(img));
          break;
        case DescriptorKind::LTP: {
          auto [pos, neg] = ltp_maps(img, config.tau);
          maps.emplace_back("ltp_pos", std::move(pos));
          maps.emplace_back("ltp_neg", std::move(neg));
          break;
        }
        case DescriptorKind::LDP:
          maps.emplace_back("ldp", ldp_map(img, config.t));
          break;
        case DescriptorKind::HOLDP:
        case DescriptorKind::AHOLDP:
          for (auto& m : encode_pattern_maps(img, config.code_config())) {
            maps.emplace_back("layer_" + std::to_string(m.layer), std::move(m));
          }
          break;
      }
      ensure_dir(pmap_out);
      for (const auto& [name, map] : maps) {
        save_pgm(map_to_image(map), std::filesystem::path(pmap_out) / (name + ".pgm"));
      }
      return 0;
    }

    if (*extract_cmd) {
      const auto policy = ex_resize.policy();
      const DescriptorConfig config = ex_desc.config();
      FeatureFormat format = feature_format_for(ex_out);
      if (ex_format == "bin") {
        format = FeatureFormat::Binary;
      } else if (ex_format == "csv") {
        format = FeatureFormat::Csv;
      } else if (ex_format != "auto") {
        throw ArgumentError("--format must be auto, bin or csv");
      }
      const DatasetManifest manifest = load_manifest(ex_manifest);

      std::vector<std::optional<FeatureRecord>> records(manifest.entries.size());
      std::vector<std::string> failures(manifest.entries.size());
      parallel_for(manifest.entries.size(), threads, [&](std::size_t i) {
        const auto& entry = manifest.entries[i];
        try {
          records[i] = FeatureRecord{entry.label,
                                     extract(load_and_resize(entry.path, policy), config).values};
        } catch (const std::exception& e) {
          failures[i] = e.what();
        }
      });

      FeatureSet set;
      set.config = config;
      std::size_t skipped = 0;
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i]) {
          set.records.push_back(std::move(*records[i]));
        } else {
          ++skipped;
          err << "holdp: warning: skipping " << manifest.entries[i].path.string() << ": "
              << failures[i] << "\n";
        }
      }
      save_features(ex_out, set, format);
      err << "holdp: extracted " << set.records.size() << " records (" << skipped
          << " skipped), " << config.fingerprint() << "\n";
      return skipped == 0 ? 0 : 1;
    }

    if (*bench) {
      SplitSpec split;
      split.train_fraction = b_train_fraction;
      split.train_count = b_train_count;
      split.repeats = b_repeats;
      split.seed = b_seed;
      split.validate();

      SweepSpec sweep;
      sweep.orders = parse_int_list(b_orders, "--orders");
      sweep.t_values = parse_int_list(b_t_values, "--t-list");
      sweep.adaptive = !b_no_adaptive;
      sweep.lbp = sweep.ldp = false;
      sweep.ltp_taus.clear();
      if (b_baselines != "none") {
        std::stringstream ss(b_baselines);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (item == "lbp") {
            sweep.lbp = true;
          } else if (item == "ldp") {
            sweep.ldp = true;
          } else if (item == "ltp") {
            sweep.ltp_taus = parse_double_list(b_taus, "--tau-list");
          } else {
            throw ArgumentError("--baselines: unknown baseline '" + item + "'");
          }
        }
      }
      sweep.ldp_t = b_ldp_t;
      sweep.source = parse_response_source(b_source);
      sweep.norm = parse_normalization(b_norm);
      const auto configs = sweep.configs();

      BenchmarkOptions options;
      options.resize = b_resize.policy();
      options.threads = threads;
      const DatasetManifest manifest = load_manifest(b_manifest);
      const auto reports = run_benchmark(manifest, split, configs, options);

      write_text(b_json, report_json(reports, split, manifest.name, b_timing));
      if (!b_csv.empty()) write_text(b_csv, sweep_table_csv(reports, sweep));
      for (const auto& r : reports) {
        err << "holdp: " << r.config.label() << " mean=" << r.mean << " std=" << r.stddev
            << " (" << r.wall_seconds << " s)\n";
      }
      return 0;
    }

    if (*synth) {
      s_spec.jitter = !s_no_jitter;
      s_spec.validate();
      const auto manifest = write_synth_dataset(s_spec, s_out);
      err << "holdp: wrote " << manifest.entries.size() << " images to " << s_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "holdp: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace holdp::cli
