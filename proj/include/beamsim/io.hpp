// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "beamsim/beamstats.hpp"
#include "beamsim/channel.hpp"
#include "beamsim/montecarlo.hpp"

namespace beamsim {

constexpr const char* kVersion = "0.1.0";

/// Config / constraint problems; the CLI maps these to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem / format problems; the CLI maps these to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All selected runs produced degenerate channels; CLI exit code 3.
struct DegenerateExperimentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// number formatting: shortest representation that round-trips exactly
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::size_t line_no, std::string_view what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw IoError("line " + std::to_string(line_no) + ": non-numeric " + std::string(what) + " '" +
                  std::string(text) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view text, std::size_t line_no, std::string_view what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw IoError("line " + std::to_string(line_no) + ": non-numeric " + std::string(what) + " '" +
                  std::string(text) + "'");
  return v;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(trim(s.substr(pos)));
      break;
    }
    out.push_back(trim(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// channel matrix CSV (defined by the channel module):
//   # rows=<Nr> cols=<Nt> carrier_ghz=<f>
//   row,col,re,im            (row-major, Nr*Nt lines)
// ---------------------------------------------------------------------------

inline void write_channels(std::ostream& os, const std::vector<ChannelMatrix>& mats) {
  for (const ChannelMatrix& m : mats) {
    os << "# rows=" << m.entries.rows() << " cols=" << m.entries.cols()
       << " carrier_ghz=" << format_double(m.carrier_ghz) << "\n";
    for (std::size_t r = 0; r < m.entries.rows(); ++r)
      for (std::size_t c = 0; c < m.entries.cols(); ++c)
        os << r << "," << c << "," << format_double(m.entries(r, c).real()) << ","
           << format_double(m.entries(r, c).imag()) << "\n";
  }
}

inline void write_channels(const std::string& path, const std::vector<ChannelMatrix>& mats) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_channels(os, mats);
}

inline std::vector<ChannelMatrix> ingest_channels(std::istream& is) {
  std::vector<ChannelMatrix> mats;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (line.rfind("# rows=", 0) != 0)
      throw IoError("line " + std::to_string(line_no) + ": expected header '# rows=... cols=... carrier_ghz=...'");

    std::size_t rows = 0, cols = 0;
    double carrier = 0.0;
    {
      std::istringstream hs(line.substr(1));
      std::string tok;
      bool have_rows = false, have_cols = false, have_carrier = false;
      while (hs >> tok) {
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos)
          throw IoError("line " + std::to_string(line_no) + ": malformed header token '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "rows") {
          rows = static_cast<std::size_t>(parse_uint(val, line_no, "rows"));
          have_rows = true;
        } else if (key == "cols") {
          cols = static_cast<std::size_t>(parse_uint(val, line_no, "cols"));
          have_cols = true;
        } else if (key == "carrier_ghz") {
          carrier = parse_double(val, line_no, "carrier_ghz");
          have_carrier = true;
        } else {
          throw IoError("line " + std::to_string(line_no) + ": unknown header key '" + key + "'");
        }
      }
      if (!have_rows || !have_cols || !have_carrier)
        throw IoError("line " + std::to_string(line_no) + ": header missing rows/cols/carrier_ghz");
      if (rows == 0 || cols == 0)
        throw IoError("line " + std::to_string(line_no) + ": header dimensions must be positive");
    }

    ChannelMatrix m;
    m.entries = CMatrix(rows, cols);
    m.carrier_ghz = carrier;
    m.meta = "ingested";
    for (std::size_t k = 0; k < rows * cols; ++k) {
      if (!std::getline(is, line)) {
        throw IoError("line " + std::to_string(line_no + 1) + ": truncated matrix block (expected " +
                      std::to_string(rows * cols) + " entries)");
      }
      const std::size_t entry_line = ++line_no;
      const std::vector<std::string> f = split(line, ',');
      if (f.size() != 4)
        throw IoError("line " + std::to_string(entry_line) + ": expected 'row,col,re,im'");
      const std::size_t r = static_cast<std::size_t>(parse_uint(f[0], entry_line, "row"));
      const std::size_t c = static_cast<std::size_t>(parse_uint(f[1], entry_line, "col"));
      if (r >= rows || c >= cols)
        throw IoError("line " + std::to_string(entry_line) + ": index (" + f[0] + "," + f[1] +
                      ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
      m.entries(r, c) =
          cxd(parse_double(f[2], entry_line, "re"), parse_double(f[3], entry_line, "im"));
    }
    mats.push_back(std::move(m));
  }
  return mats;
}

inline std::vector<ChannelMatrix> ingest_channels(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return ingest_channels(is);
}

// ---------------------------------------------------------------------------
// histogram CSV: beam_index,count,probability
// ---------------------------------------------------------------------------

inline void write_histogram_csv(std::ostream& os, const BeamHistogram& hist) {
  os << "beam_index,count,probability\n";
  const double inv = hist.total > 0 ? 1.0 / static_cast<double>(hist.total) : 0.0;
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    os << i << "," << hist.counts[i] << ","
       << format_double(static_cast<double>(hist.counts[i]) * inv) << "\n";
}

inline BeamHistogram read_histogram_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(is, line) || trim(line) != "beam_index,count,probability")
    throw IoError("line 1: expected histogram header 'beam_index,count,probability'");
  ++line_no;
  BeamHistogram hist;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 3) throw IoError("line " + std::to_string(line_no) + ": expected 3 fields");
    const std::size_t idx = static_cast<std::size_t>(parse_uint(f[0], line_no, "beam_index"));
    if (idx != hist.counts.size())
      throw IoError("line " + std::to_string(line_no) + ": beam_index out of order");
    const std::uint64_t count = parse_uint(f[1], line_no, "count");
    parse_double(f[2], line_no, "probability");  // validated, recomputable
    hist.counts.push_back(count);
    hist.total += count;
  }
  return hist;
}

// ---------------------------------------------------------------------------
// run configuration
// ---------------------------------------------------------------------------

struct OutputFormats {
  bool csv = true;
  bool plot_data = false;
};

/// Parsed configuration: either a generated experiment or an ingest path.
struct RunConfig {
  ExperimentSpec spec;
  std::string out_dir = "out";
  OutputFormats formats;
  std::string ingest_path;  // non-empty switches to ingest mode

  bool ingest_mode() const { return !ingest_path.empty(); }
};

namespace detail {

struct ConfigEntry {
  std::string value;
  std::size_t line_no;
};

inline ScenarioKind parse_scenario_kind(const std::string& v, std::size_t line_no) {
  if (v == "UMi" || v == "umi") return ScenarioKind::UMi;
  if (v == "UMa" || v == "uma") return ScenarioKind::UMa;
  if (v == "RMa" || v == "rma") return ScenarioKind::RMa;
  throw ConfigError("line " + std::to_string(line_no) + ": unknown scenario kind '" + v +
                    "' (expected UMi, UMa or RMa)");
}

}  // namespace detail

/// Parse the flat key=value config document (one optional [scenario]
/// section). Unknown keys are rejected with their line number; scenario
/// defaults fill everything the file leaves out.
inline RunConfig parse_config(std::istream& is) {
  std::map<std::string, detail::ConfigEntry> top, scenario;
  bool scenario_section_seen = false;
  std::string line;
  std::size_t line_no = 0;
  std::string section;

  while (std::getline(is, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      if (section != "scenario")
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section '[" + section + "]'");
      scenario_section_seen = true;
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    auto& dest = section.empty() ? top : scenario;
    if (dest.count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    dest[key] = {value, line_no};
  }

  RunConfig cfg;

  auto take = [](std::map<std::string, detail::ConfigEntry>& m,
                 const std::string& key) -> std::optional<detail::ConfigEntry> {
    auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    detail::ConfigEntry e = it->second;
    m.erase(it);
    return e;
  };
  auto as_double = [](const detail::ConfigEntry& e, const char* what) {
    try {
      return parse_double(e.value, e.line_no, what);
    } catch (const IoError& err) {
      throw ConfigError(err.what());
    }
  };
  auto as_uint = [](const detail::ConfigEntry& e, const char* what) {
    try {
      return parse_uint(e.value, e.line_no, what);
    } catch (const IoError& err) {
      throw ConfigError(err.what());
    }
  };

  // --- scenario section ---
  const bool generate_mode = scenario_section_seen;
  if (generate_mode) {
    auto kind_e = take(scenario, "kind");
    auto carrier_e = take(scenario, "carrier_ghz");
    if (!kind_e) throw ConfigError("[scenario] section is missing required key 'kind'");
    if (!carrier_e) throw ConfigError("[scenario] section is missing required key 'carrier_ghz'");
    const ScenarioKind kind = detail::parse_scenario_kind(kind_e->value, kind_e->line_no);
    const double carrier = as_double(*carrier_e, "carrier_ghz");
    ScenarioConfig sc;
    try {
      sc = scenario_defaults(kind, carrier);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(carrier_e->line_no) + ": " + e.what());
    }

    struct DoubleField {
      const char* key;
      double ScenarioConfig::* member;
    };
    static constexpr DoubleField kFields[] = {
        {"bs_height_m", &ScenarioConfig::bs_height_m},
        {"ut_height_m", &ScenarioConfig::ut_height_m},
        {"min_dist_2d_m", &ScenarioConfig::min_dist_2d_m},
        {"max_dist_2d_m", &ScenarioConfig::max_dist_2d_m},
        {"tx_power_dbm", &ScenarioConfig::tx_power_dbm},
        {"path_loss_exponent", &ScenarioConfig::path_loss_exponent},
        {"shadow_sigma_db", &ScenarioConfig::shadow_sigma_db},
        {"k_factor_db", &ScenarioConfig::k_factor_db},
        {"cluster_decay_db", &ScenarioConfig::cluster_decay_db},
        {"delay_spread_ns", &ScenarioConfig::delay_spread_ns},
        {"aod_sector_half_deg", &ScenarioConfig::aod_sector_half_deg},
        {"aoa_range_half_deg", &ScenarioConfig::aoa_range_half_deg},
        {"barometric_mbar", &ScenarioConfig::barometric_mbar},
        {"humidity_percent", &ScenarioConfig::humidity_percent},
        {"temperature_c", &ScenarioConfig::temperature_c},
        {"rain_mm_per_hr", &ScenarioConfig::rain_mm_per_hr},
        {"foliage_loss_db", &ScenarioConfig::foliage_loss_db},
    };
    for (const auto& f : kFields)
      if (auto e = take(scenario, f.key)) sc.*(f.member) = as_double(*e, f.key);
    if (auto e = take(scenario, "max_clusters"))
      sc.max_clusters = static_cast<std::size_t>(as_uint(*e, "max_clusters"));
    if (auto e = take(scenario, "environment")) {
      if (e->value != "LoS" && e->value != "los")
        throw ConfigError("line " + std::to_string(e->line_no) + ": environment must be LoS");
    }
    if (!scenario.empty()) {
      const auto& bad = *scenario.begin();
      throw ConfigError("line " + std::to_string(bad.second.line_no) + ": unknown scenario key '" +
                        bad.first + "'");
    }
    try {
      validate(sc);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scenario: ") + e.what());
    }
    cfg.spec.scenario = sc;
  }

  // --- top-level ---
  if (auto e = take(top, "ingest")) cfg.ingest_path = e->value;
  if (cfg.ingest_mode() && generate_mode)
    throw ConfigError("config selects both an ingest path and a [scenario] section; exactly one is allowed");
  if (!cfg.ingest_mode() && !generate_mode)
    throw ConfigError("config needs either a [scenario] section or an ingest path");

  if (auto e = take(top, "runs")) cfg.spec.n_runs = static_cast<std::size_t>(as_uint(*e, "runs"));
  if (auto e = take(top, "seed")) cfg.spec.master_seed = as_uint(*e, "seed");
  if (auto e = take(top, "nt"))
    cfg.spec.tx_geom.num_elements = static_cast<std::size_t>(as_uint(*e, "nt"));
  if (auto e = take(top, "nr"))
    cfg.spec.rx_geom.num_elements = static_cast<std::size_t>(as_uint(*e, "nr"));
  if (auto e = take(top, "tx_spacing_wavelengths"))
    cfg.spec.tx_geom.spacing_wavelengths = as_double(*e, "tx_spacing_wavelengths");
  if (auto e = take(top, "rx_spacing_wavelengths"))
    cfg.spec.rx_geom.spacing_wavelengths = as_double(*e, "rx_spacing_wavelengths");
  if (auto e = take(top, "entropy_trace_stride"))
    cfg.spec.entropy_trace_stride = static_cast<std::size_t>(as_uint(*e, "entropy_trace_stride"));
  if (auto e = take(top, "out_dir")) cfg.out_dir = e->value;
  if (auto e = take(top, "tx_power_deltas_db")) {
    cfg.spec.tx_power_deltas_db.clear();
    for (const std::string& tok : split(e->value, ','))
      cfg.spec.tx_power_deltas_db.push_back(parse_double(tok, e->line_no, "tx_power_deltas_db"));
  }
  {
    auto bw = take(top, "subcarrier_bandwidth_hz");
    auto cnt = take(top, "subcarrier_count");
    if (bw.has_value() != cnt.has_value())
      throw ConfigError("subcarrier_bandwidth_hz and subcarrier_count must be given together");
    if (bw) {
      SubcarrierCheck sc;
      sc.bandwidth_hz = as_double(*bw, "subcarrier_bandwidth_hz");
      sc.count = static_cast<std::size_t>(as_uint(*cnt, "subcarrier_count"));
      if (sc.count < 1) throw ConfigError("subcarrier_count must be >= 1");
      cfg.spec.subcarrier_check = sc;
    }
  }
  if (auto e = take(top, "formats")) {
    cfg.formats.csv = false;
    cfg.formats.plot_data = false;
    for (const std::string& tok : split(e->value, ',')) {
      if (tok == "csv")
        cfg.formats.csv = true;
      else if (tok == "plot-data")
        cfg.formats.plot_data = true;
      else
        throw ConfigError("line " + std::to_string(e->line_no) + ": unknown report format '" + tok +
                          "' (expected csv or plot-data)");
    }
  }
  if (!top.empty()) {
    const auto& bad = *top.begin();
    throw ConfigError("line " + std::to_string(bad.second.line_no) + ": unknown key '" + bad.first + "'");
  }

  if (!cfg.ingest_mode()) {
    try {
      validate(cfg.spec);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file '" + path + "'");
  return parse_config(is);
}

// ---------------------------------------------------------------------------
// report emission
// ---------------------------------------------------------------------------

struct ReportBundle {
  std::string summary_path;
  std::string rx_hist_path;
  std::string tx_hist_path;
  std::string trace_path;
  std::string sv_spectrum_path;
  std::string meta_path;
  std::string rx_plot_path;  // empty unless plot-data was requested
};

namespace detail {

inline void open_or_throw(std::ofstream& os, const std::string& path) {
  os.open(path, std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
}

}  // namespace detail

/// Write summary.csv, per-side histograms, the entropy trace, a sample of
/// the singular-value spectrum and run metadata. The output directory is
/// probed before anything is written, so a bad directory never leaves a
/// partial summary behind.
inline ReportBundle emit_reports(const ExperimentResult& result, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  {
    const fs::path probe = dir / ".beamsim_write_probe";
    std::ofstream p(probe);
    if (!p) throw IoError("output directory '" + cfg.out_dir + "' is not writable");
    p.close();
    fs::remove(probe, ec);
  }

  ReportBundle bundle;
  const std::size_t nt = result.spec.tx_geom.num_elements;
  const std::size_t nr = result.spec.rx_geom.num_elements;

  {
    bundle.summary_path = (dir / "summary.csv").string();
    std::ofstream os;
    detail::open_or_throw(os, bundle.summary_path);
    os << "nt,nr,runs,seed,tx_entropy_bits,rx_entropy_bits,tx_rel_entropy,rx_rel_entropy,"
          "joint_entropy_bits,mean_eff_rank,expected_probes_tx,expected_probes_rx,"
          "power_invariance_violations\n";
    os << nt << "," << nr << "," << result.records.size() << "," << result.spec.master_seed << ","
       << format_double(result.tx_entropy.entropy_bits) << ","
       << format_double(result.rx_entropy.entropy_bits) << ","
       << format_double(result.tx_entropy.relative_entropy) << ","
       << format_double(result.rx_entropy.relative_entropy) << ","
       << format_double(result.joint_entropy_bits) << ","
       << format_double(result.rank_summary.mean_effective_rank) << ","
       << format_double(result.probe_metrics.tx) << "," << format_double(result.probe_metrics.rx)
       << "," << result.power_invariance_violations << "\n";
  }
  {
    bundle.rx_hist_path = (dir / "rx_hist.csv").string();
    std::ofstream os;
    detail::open_or_throw(os, bundle.rx_hist_path);
    write_histogram_csv(os, result.rx_hist);
  }
  {
    bundle.tx_hist_path = (dir / "tx_hist.csv").string();
    std::ofstream os;
    detail::open_or_throw(os, bundle.tx_hist_path);
    write_histogram_csv(os, result.tx_hist);
  }
  {
    bundle.trace_path = (dir / "entropy_trace.csv").string();
    std::ofstream os;
    detail::open_or_throw(os, bundle.trace_path);
    os << "run_count,rx_entropy,tx_entropy\n";
    for (const TracePoint& tp : result.entropy_trace)
      os << tp.run_count << "," << format_double(tp.rx_entropy_bits) << ","
         << format_double(tp.tx_entropy_bits) << "\n";
  }
  {
    bundle.sv_spectrum_path = (dir / "sv_spectrum.csv").string();
    std::ofstream os;
    detail::open_or_throw(os, bundle.sv_spectrum_path);
    os << "run_index,sigma1,sigma2_over_sigma1,effective_rank\n";
    const std::size_t sample = std::min<std::size_t>(result.records.size(), 100);
    for (std::size_t k = 0; k < sample; ++k) {
      const RunRecord& rec = result.records[k];
      os << (result.spec.run_begin + k) << "," << format_double(rec.sigma1) << ","
         << format_double(rec.sigma_ratio) << "," << rec.effective_rank << "\n";
    }
  }
  {
    bundle.meta_path = (dir / "run_meta.csv").string();
    std::ofstream os;
    detail::open_or_throw(os, bundle.meta_path);
    char stamp[32] = "unknown";
    const std::time_t now = std::time(nullptr);
    if (std::tm tm_buf; gmtime_r(&now, &tm_buf) != nullptr)
      std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_buf);
    os << "key,value\n";
    os << "version," << kVersion << "\n";
    os << "timestamp," << stamp << "\n";
    os << "seed," << result.spec.master_seed << "\n";
    os << "runs," << result.records.size() << "\n";
    os << "degenerate_runs," << result.degenerate_count << "\n";
    if (!cfg.ingest_mode()) {
      os << "scenario," << to_string(result.spec.scenario.kind) << "\n";
      os << "carrier_ghz," << format_double(result.spec.scenario.carrier_ghz) << "\n";
      os << "tx_power_dbm," << format_double(result.spec.scenario.tx_power_dbm) << "\n";
    } else {
      os << "source,ingested\n";
    }
  }
  if (cfg.formats.plot_data) {
    bundle.rx_plot_path = (dir / "rx_hist.dat").string();
    std::ofstream os;
    detail::open_or_throw(os, bundle.rx_plot_path);
    // Two columns, sorted by beam center in sine space: a Fig.-1 style
    // histogram axis.
    std::vector<std::pair<double, std::uint64_t>> rows;
    rows.reserve(nr);
    for (std::size_t m = 0; m < nr; ++m) {
      const double psi = wrap_spatial_freq(2.0 * static_cast<double>(m) / static_cast<double>(nr));
      rows.emplace_back(psi, result.rx_hist.counts[m]);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [psi, count] : rows) os << format_double(psi) << " " << count << "\n";
  }
  return bundle;
}

}  // namespace beamsim
