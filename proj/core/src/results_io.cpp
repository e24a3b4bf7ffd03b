#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rbd/errors.hpp"
#include "rbd/sim.hpp"

namespace rbd {

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_num(const std::string& text, std::size_t line, const std::string& field) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end || text.empty())
    throw ParseError(line, field, "cannot parse '" + text + "'");
  return v;
}

std::string join_gains(const std::vector<double>& g) {
  std::string s;
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? ";" : "") + fmt(g[i]);
  return s;
}

struct SweepMeta {
  std::size_t points = 0;
  std::map<std::string, std::string> fields;
};

// "# sweep <i>: key=value key=value ..."
void parse_meta(const std::string& body, std::size_t line, std::vector<SweepMeta>& metas,
                std::map<std::pair<std::size_t, std::size_t>, std::string>& errors) {
  std::istringstream is(body);
  std::string kind;
  is >> kind;
  if (kind == "sweep") {
    std::string idx_text;
    is >> idx_text;
    if (idx_text.empty() || idx_text.back() != ':') throw ParseError(line, "sweep", "malformed sweep line");
    idx_text.pop_back();
    const auto idx = parse_num<std::size_t>(idx_text, line, "sweep");
    if (idx != metas.size()) throw ParseError(line, "sweep", "sweep indices out of order");
    SweepMeta m;
    std::string kv;
    while (is >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError(line, kv, "expected key=value");
      m.fields[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (m.fields.count("points")) m.points = parse_num<std::size_t>(m.fields["points"], line, "points");
    metas.push_back(std::move(m));
  } else if (kind == "error") {
    std::size_t s = 0, p = 0;
    std::string s_text, p_text;
    is >> s_text >> p_text;
    s = parse_num<std::size_t>(s_text, line, "error");
    if (p_text.empty() || p_text.back() != ':') throw ParseError(line, "error", "malformed error line");
    p_text.pop_back();
    p = parse_num<std::size_t>(p_text, line, "error");
    std::string msg;
    std::getline(is, msg);
    if (!msg.empty() && msg.front() == ' ') msg.erase(0, 1);
    errors[{s, p}] = msg;
  }
}

}  // namespace

void write_results(std::ostream& os, std::span<const SweepResult> results) {
  os << "# snr_convention: " << kSnrConvention << '\n';
  for (std::size_t s = 0; s < results.size(); ++s) {
    const SimConfig& c = results[s].config;
    os << "# sweep " << s << ": points=" << results[s].points.size() << " master_seed=" << c.master_seed
       << " target_bit_errors=" << c.target_bit_errors << " max_bits=" << c.max_bits
       << " min_frames=" << c.min_frames;
    if (!c.scenario.rx_gains.empty()) os << " rx_gains=" << join_gains(c.scenario.rx_gains);
    if (!c.scenario.tx_gains.empty()) os << " tx_gains=" << join_gains(c.scenario.tx_gains);
    os << '\n';
    for (std::size_t p = 0; p < results[s].points.size(); ++p) {
      const auto& err = results[s].points[p].error;
      if (err) {
        std::string msg = *err;
        for (char& ch : msg)
          if (ch == '\n' || ch == '\r') ch = ' ';
        os << "# error " << s << ' ' << p << ": " << msg << '\n';
      }
    }
  }
  os << kResultsHeader << '\n';
  for (const auto& r : results) {
    const SimConfig& c = r.config;
    for (const auto& p : r.points) {
      os << to_string(c.detector) << ',' << c.k_iterations << ',' << c.n << ',' << c.m << ','
         << c.qam_order << ',' << to_string(c.scenario.kind) << ',' << fmt(c.scenario.zeta_t) << ','
         << fmt(c.scenario.zeta_r) << ',' << fmt(c.scenario.theta) << ',' << fmt(p.snr_db) << ','
         << p.bits_sent << ',' << p.bit_errors << ',' << fmt(p.ber) << ','
         << (p.error ? "error" : p.below_resolution ? "below_resolution" : "ok") << '\n';
    }
  }
}

std::vector<SweepResult> read_results(std::istream& is) {
  std::vector<SweepMeta> metas;
  std::map<std::pair<std::size_t, std::size_t>, std::string> errors;
  std::map<std::string, std::size_t> col;
  std::vector<SweepResult> out;
  std::size_t rows_in_current = 0;

  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      parse_meta(line.substr(1), lineno, metas, errors);
      continue;
    }
    const auto cells = split(line, ',');
    if (!have_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) col[cells[i]] = i;
      for (const auto& name : split(kResultsHeader, ','))
        if (!col.count(name)) throw ParseError(lineno, name, "missing column");
      have_header = true;
      continue;
    }
    if (cells.size() != col.size())
      throw ParseError(lineno, "row", "expected " + std::to_string(col.size()) + " fields, got " +
                                          std::to_string(cells.size()));
    auto cell = [&](const char* name) -> const std::string& { return cells[col.at(name)]; };

    SimConfig c;
    try {
      c.detector = parse_detector(cell("detector"));
    } catch (const std::exception& e) {
      throw ParseError(lineno, "detector", e.what());
    }
    c.k_iterations = parse_num<int>(cell("k"), lineno, "k");
    c.n = parse_num<std::size_t>(cell("N"), lineno, "N");
    c.m = parse_num<std::size_t>(cell("M"), lineno, "M");
    c.qam_order = parse_num<int>(cell("qam"), lineno, "qam");
    try {
      c.scenario.kind = parse_scenario_kind(cell("scenario"));
    } catch (const std::exception& e) {
      throw ParseError(lineno, "scenario", e.what());
    }
    c.scenario.zeta_t = parse_num<double>(cell("zeta_t"), lineno, "zeta_t");
    c.scenario.zeta_r = parse_num<double>(cell("zeta_r"), lineno, "zeta_r");
    c.scenario.theta = parse_num<double>(cell("theta_rad"), lineno, "theta_rad");

    BerPoint p;
    p.snr_db = parse_num<double>(cell("snr_db"), lineno, "snr_db");
    p.bits_sent = parse_num<std::uint64_t>(cell("bits"), lineno, "bits");
    p.bit_errors = parse_num<std::uint64_t>(cell("errors"), lineno, "errors");
    p.ber = parse_num<double>(cell("ber"), lineno, "ber");
    try {
      p.frames = p.bits_sent / c.bits_per_frame();
    } catch (const std::exception& e) {
      throw ParseError(lineno, "qam", e.what());
    }
    const std::string& flag = cell("flag");
    if (flag == "below_resolution") {
      p.below_resolution = true;
    } else if (flag == "error") {
      p.error = std::string();
    } else if (flag != "ok") {
      throw ParseError(lineno, "flag", "unknown flag '" + flag + "'");
    }

    // A new sweep starts when the declared point count is reached or, without
    // metadata, when the configuration columns change.
    bool new_sweep = out.empty();
    if (!new_sweep) {
      const std::size_t s = out.size() - 1;
      if (s < metas.size() && metas[s].points > 0) {
        new_sweep = rows_in_current >= metas[s].points;
      } else {
        const SimConfig& prev = out.back().config;
        new_sweep = prev.detector != c.detector || prev.k_iterations != c.k_iterations || prev.n != c.n ||
                    prev.m != c.m || prev.qam_order != c.qam_order || !(prev.scenario == c.scenario);
      }
    }
    if (new_sweep) {
      const std::size_t s = out.size();
      if (s < metas.size()) {
        const auto& f = metas[s].fields;
        auto get = [&](const char* key, std::uint64_t& dst) {
          if (auto it = f.find(key); it != f.end()) dst = parse_num<std::uint64_t>(it->second, lineno, key);
        };
        get("master_seed", c.master_seed);
        get("target_bit_errors", c.target_bit_errors);
        get("max_bits", c.max_bits);
        get("min_frames", c.min_frames);
        auto gains = [&](const char* key, std::vector<double>& dst) {
          if (auto it = f.find(key); it != f.end())
            for (const auto& g : split(it->second, ';')) dst.push_back(parse_num<double>(g, lineno, key));
        };
        gains("rx_gains", c.scenario.rx_gains);
        gains("tx_gains", c.scenario.tx_gains);
      }
      out.push_back(SweepResult{c, {}});
      rows_in_current = 0;
    }
    if (auto it = errors.find({out.size() - 1, rows_in_current}); it != errors.end() && p.error)
      p.error = it->second;
    out.back().config.snr_db_list.push_back(p.snr_db);
    out.back().points.push_back(std::move(p));
    ++rows_in_current;
  }
  if (!have_header) throw ParseError(lineno, "header", "no header line");
  return out;
}

void write_results(const std::filesystem::path& path, std::span<const SweepResult> results) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_results(os, results);
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<SweepResult> read_results(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_results(is);
}

void write_plot_data(std::ostream& os, std::span<const SweepResult> results) {
  for (std::size_t s = 0; s < results.size(); ++s) {
    const SimConfig& c = results[s].config;
    if (s) os << "\n\n";
    os << "# " << to_string(c.detector);
    if (c.detector != Detector::Cholesky) os << " k=" << c.k_iterations;
    os << " N=" << c.n << " M=" << c.m << " qam=" << c.qam_order << ' ' << to_string(c.scenario.kind) << '\n';
    os << "snr_db,ber\n";
    for (const auto& p : results[s].points) os << fmt(p.snr_db) << ',' << fmt(p.ber) << '\n';
  }
}

}  // namespace rbd
