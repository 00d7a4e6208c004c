#include "ftiss/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "ftiss/errors.hpp"
#include "ftiss/sim.hpp"

namespace ftiss {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// ---------------------------------------------------------------------------
// scenario text

struct Entry {
  std::string value;
  int line;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

const std::vector<std::string> kSections = {"formation", "gains",   "initial",
                                            "disturbance", "leaders", "sim"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

class Document {
 public:
  explicit Document(const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    std::string current;
    while (std::getline(is, raw)) {
      ++line_no;
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError(line_no, "", "unterminated section header");
        current = std::string(trim(line.substr(1, line.size() - 2)));
        bool known = false;
        for (const auto& s : kSections) known = known || s == current;
        if (!known) throw ParseError(line_no, current, "unknown section");
        if (sections_.count(current)) throw ParseError(line_no, current, "section repeated");
        sections_[current];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "", "expected key = value");
      if (current.empty()) throw ParseError(line_no, "", "key outside of any section");
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty()) throw ParseError(line_no, current, "empty key");
      auto& sec = sections_[current];
      if (sec.count(key)) throw ParseError(line_no, current + "." + key, "duplicate key");
      sec[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
    }
    last_line_ = line_no;
  }

  const Entry* find(const std::string& section, const std::string& key) {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return nullptr;
    auto it = sit->second.find(key);
    if (it == sit->second.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const Entry& require(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) throw ParseError(last_line_, section + "." + key, "missing required key");
    return *e;
  }

  void reject_unused() const {
    for (const auto& [name, sec] : sections_) {
      for (const auto& [key, entry] : sec) {
        if (!entry.used) throw ParseError(entry.line, name + "." + key, "unknown key");
      }
    }
  }

 private:
  std::map<std::string, Section> sections_;
  int last_line_ = 0;
};

double to_double(const std::string& token, const Entry& e, const std::string& field) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError(e.line, field, "'" + token + "' is not a finite number");
  }
  return v;
}

long long to_integer(const std::string& token, const Entry& e, const std::string& field) {
  long long v = 0;
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(e.line, field, "'" + token + "' is not an integer");
  }
  return v;
}

std::vector<double> numbers(const Entry& e, const std::string& field, std::size_t expected) {
  const auto ws = words(e.value);
  if (expected != 0 && ws.size() != expected) {
    throw ParseError(e.line, field,
                     "expected " + std::to_string(expected) + " numbers, got " +
                         std::to_string(ws.size()));
  }
  std::vector<double> out;
  for (const auto& w : ws) out.push_back(to_double(w, e, field));
  return out;
}

Vec3 triple(const Entry& e, const std::string& field) {
  const auto v = numbers(e, field, 3);
  return Vec3(v[0], v[1], v[2]);
}

double scalar(Document& doc, const std::string& sec, const std::string& key,
              std::optional<double> fallback = std::nullopt) {
  const Entry* e = fallback ? doc.find(sec, key) : &doc.require(sec, key);
  if (!e) return *fallback;
  return numbers(*e, sec + "." + key, 1)[0];
}

long long integer(Document& doc, const std::string& sec, const std::string& key,
                  std::optional<long long> fallback = std::nullopt) {
  const Entry* e = fallback ? doc.find(sec, key) : &doc.require(sec, key);
  if (!e) return *fallback;
  const auto ws = words(e->value);
  if (ws.size() != 1) throw ParseError(e->line, sec + "." + key, "expected one integer");
  return to_integer(ws[0], *e, sec + "." + key);
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name,
                        bool require_rigidity) {
  Document doc(text);
  std::vector<std::string> problems;

  // [formation]
  const long long dimension = integer(doc, "formation", "dimension");
  if (dimension != 2 && dimension != 3) problems.push_back("formation.dimension must be 2 or 3");
  ElevationParams params{dimension == 2 ? ElevationMode::Planar2D : ElevationMode::Spatial3D,
                         scalar(doc, "formation", "rho")};
  const long long n = integer(doc, "formation", "n");
  const long long n_leaders = integer(doc, "formation", "n_leaders");
  if (n < 2 || n > 100000) {
    throw ParseError(doc.require("formation", "n").line, "formation.n", "n must be at least 2");
  }

  std::vector<Edge> edges;
  {
    const Entry& e = doc.require("formation", "edges");
    for (const auto& pair : split(e.value, ',')) {
      const auto ij = words(pair);
      if (ij.size() != 2) throw ParseError(e.line, "formation.edges", "each edge is 'i j'");
      const auto i = to_integer(ij[0], e, "formation.edges");
      const auto j = to_integer(ij[1], e, "formation.edges");
      edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1)});
    }
  }
  std::vector<double> distances;
  {
    const Entry& e = doc.require("formation", "distances");
    for (const auto& tok : split(e.value, ',')) {
      distances.push_back(to_double(tok, e, "formation.distances"));
    }
  }

  // [gains]
  ControlGains gains{scalar(doc, "gains", "kp"), scalar(doc, "gains", "ke"),
                     scalar(doc, "gains", "alpha")};

  // [initial]
  Positions p0 = Positions::Zero(3 * n);
  std::vector<AgentFrame> frames(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const std::string key = "p" + std::to_string(i + 1);
    p0.segment<3>(3 * i) = triple(doc.require("initial", key), "initial." + key);
    const std::string fkey = "frame" + std::to_string(i + 1);
    if (const Entry* fe = doc.find("initial", fkey)) {
      const auto v = numbers(*fe, "initial." + fkey, 7);
      const Vec3 axis(v[1], v[2], v[3]);
      if (!(axis.norm() > 0.0)) {
        throw ParseError(fe->line, "initial." + fkey, "rotation axis must be nonzero");
      }
      frames[i] = AgentFrame::from_axis_angle(v[0], axis, Vec3(v[4], v[5], v[6]));
    }
  }

  // [disturbance]
  DisturbanceFrame dframe = DisturbanceFrame::Global;
  if (const Entry* e = doc.find("disturbance", "frame")) {
    if (e->value == "global") {
      dframe = DisturbanceFrame::Global;
    } else if (e->value == "local") {
      dframe = DisturbanceFrame::Local;
    } else {
      throw ParseError(e->line, "disturbance.frame", "expected 'global' or 'local'");
    }
  }
  std::vector<Vec3> disturbance(static_cast<std::size_t>(n), Vec3::Zero());
  for (long long i = 0; i < n; ++i) {
    const std::string key = "w" + std::to_string(i + 1);
    if (const Entry* e = doc.find("disturbance", key)) {
      if (i < n_leaders) {
        problems.push_back("disturbance." + key + ": agent " + std::to_string(i + 1) +
                           " is a leader");
      } else {
        disturbance[i] = triple(*e, "disturbance." + key);
      }
    }
  }

  // [leaders]
  Vec3 v_star = Vec3::Zero();
  if (const Entry* e = doc.find("leaders", "v_star")) v_star = triple(*e, "leaders.v_star");

  // [sim]
  const double dt = scalar(doc, "sim", "dt", 1e-3);
  const double t_end = scalar(doc, "sim", "t_end", 30.0);
  const long long stride = integer(doc, "sim", "sample_stride", 10);
  Integrator integrator = Integrator::Rk4;
  if (const Entry* e = doc.find("sim", "integrator")) {
    if (e->value == "rk4") {
      integrator = Integrator::Rk4;
    } else if (e->value == "euler") {
      integrator = Integrator::Euler;
    } else {
      throw ParseError(e->line, "sim.integrator", "expected 'rk4' or 'euler'");
    }
  }

  doc.reject_unused();

  std::optional<FormationGraph> graph;
  try {
    graph.emplace(static_cast<int>(n), static_cast<int>(n_leaders), edges);
  } catch (const Error& err) {
    problems.push_back(std::string("formation: ") + err.what());
  }
  if (!graph) {
    // Still report the independent field checks alongside the graph problem.
    if (!(params.rho > 0.0)) problems.push_back("formation.rho must be positive");
    try {
      validate(gains);
    } catch (const Error& err) {
      problems.push_back(std::string("gains: ") + err.what());
    }
    if (!(dt > 0.0)) problems.push_back("sim.dt must be positive");
    if (!(t_end > 0.0)) problems.push_back("sim.t_end must be positive");
    throw ValidationError(std::move(problems));
  }

  Scenario s{
      .name = name,
      .params = params,
      .graph = std::move(*graph),
      .desired_distances = std::move(distances),
      .gains = gains,
      .frames = std::move(frames),
      .p0 = std::move(p0),
      .disturbance_frame = dframe,
      .disturbance = std::move(disturbance),
      .v_star = v_star,
      .dt = dt,
      .t_end = t_end,
      .integrator = integrator,
      .sample_stride = static_cast<int>(std::clamp<long long>(stride, 0, 1 << 30)),
  };
  auto more = validation_problems(s, require_rigidity);
  problems.insert(problems.end(), more.begin(), more.end());
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, bool require_rigidity) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.stem().string(), require_rigidity);
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream os;
  auto vec = [](const Vec3& v) {
    return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
  };
  const int n = s.agent_count();

  os << "[formation]\n";
  os << "dimension = " << s.params.dimension() << "\n";
  os << "rho = " << format_double(s.params.rho) << "\n";
  os << "n = " << n << "\n";
  os << "n_leaders = " << s.graph.leader_count() << "\n";
  os << "edges = ";
  for (int k = 0; k < s.graph.edge_count(); ++k) {
    const Edge& e = s.graph.edges()[k];
    os << (k ? ", " : "") << e.head + 1 << " " << e.tail + 1;
  }
  os << "\ndistances = ";
  for (std::size_t k = 0; k < s.desired_distances.size(); ++k) {
    os << (k ? ", " : "") << format_double(s.desired_distances[k]);
  }
  os << "\n\n[gains]\n";
  os << "kp = " << format_double(s.gains.kp) << "\n";
  os << "ke = " << format_double(s.gains.ke) << "\n";
  os << "alpha = " << format_double(s.gains.alpha) << "\n";

  os << "\n[initial]\n";
  for (int i = 0; i < n; ++i) os << "p" << i + 1 << " = " << vec(agent_position(s.p0, i)) << "\n";
  for (int i = 0; i < n; ++i) {
    const AgentFrame& f = s.frames[i];
    if (f == AgentFrame::identity()) continue;
    os << "frame" << i + 1 << " = " << format_double(f.angle()) << " " << vec(f.axis()) << " "
       << vec(f.translation()) << "\n";
  }

  os << "\n[disturbance]\n";
  os << "frame = " << (s.disturbance_frame == DisturbanceFrame::Global ? "global" : "local")
     << "\n";
  for (int i = s.graph.leader_count(); i < n; ++i) {
    os << "w" << i + 1 << " = " << vec(s.disturbance[i]) << "\n";
  }

  os << "\n[leaders]\n";
  os << "v_star = " << vec(s.v_star) << "\n";

  os << "\n[sim]\n";
  os << "dt = " << format_double(s.dt) << "\n";
  os << "t_end = " << format_double(s.t_end) << "\n";
  os << "integrator = " << (s.integrator == Integrator::Rk4 ? "rk4" : "euler") << "\n";
  os << "sample_stride = " << s.sample_stride << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_header(int agent_count, int edge_count) {
  std::string h = "t";
  for (int i = 1; i <= agent_count; ++i) {
    for (const char* axis : {"x", "y", "z"}) h += ",p_" + std::to_string(i) + "_" + axis;
  }
  for (int k = 1; k <= edge_count; ++k) h += ",ze_" + std::to_string(k);
  h += ",V1,V,gate,bound";
  return h;
}

void write_csv(const TrajectoryLog& log, std::ostream& os) {
  os << csv_header(log.agent_count, log.edge_count) << '\n';
  for (const auto& s : log.samples) {
    os << format_double(s.t);
    for (Eigen::Index k = 0; k < s.p.size(); ++k) os << ',' << format_double(s.p(k));
    for (Eigen::Index k = 0; k < s.z.size(); ++k) os << ',' << format_double(s.z(k));
    os << ',' << format_double(s.V1) << ',' << format_double(s.V) << ',' << (s.gate ? 1 : 0) << ','
       << format_double(s.bound) << '\n';
  }
}

void emit_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(log, out);
}

TrajectoryLog read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(1, "", "empty CSV");
  const auto cols = split(line, ',');
  int n3 = 0;
  int m = 0;
  for (const auto& c : cols) {
    if (c.rfind("p_", 0) == 0) ++n3;
    if (c.rfind("ze_", 0) == 0) ++m;
  }
  if (n3 % 3 != 0 || line != csv_header(n3 / 3, m)) {
    throw ParseError(1, "", "unexpected CSV header");
  }
  TrajectoryLog log;
  log.agent_count = n3 / 3;
  log.edge_count = m;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != cols.size()) throw ParseError(line_no, "", "wrong column count");
    const Entry e{line, line_no};
    Sample s;
    std::size_t c = 0;
    s.t = to_double(fields[c++], e, "t");
    s.p.resize(n3);
    for (int k = 0; k < n3; ++k, ++c) s.p(k) = to_double(fields[c], e, cols[c]);
    s.z.resize(m);
    for (int k = 0; k < m; ++k, ++c) s.z(k) = to_double(fields[c], e, cols[c]);
    s.V1 = to_double(fields[c++], e, "V1");
    s.V = to_double(fields[c++], e, "V");
    const std::string& g = fields[c++];
    if (g != "0" && g != "1") throw ParseError(line_no, "gate", "gate must be 0 or 1");
    s.gate = g == "1";
    const std::string& b = fields[c++];
    if (b == "nan" || b == "-nan") {
      s.bound = std::nan("");
    } else {
      s.bound = to_double(b, e, "bound");
    }
    log.samples.push_back(std::move(s));
  }
  return log;
}

TrajectoryLog read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "", "cannot open " + path.string());
  return read_csv(in);
}

void emit_plot_data(const TrajectoryLog& log, const std::filesystem::path& dir,
                    const std::string& stem) {
  {
    std::ofstream out(dir / (stem + "_trajectories.csv"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot data to " + dir.string());
    out << "t";
    for (int i = 1; i <= log.agent_count; ++i) {
      for (const char* axis : {"x", "y", "z"}) out << ",p_" << i << "_" << axis;
    }
    out << '\n';
    for (const auto& s : log.samples) {
      out << format_double(s.t);
      for (Eigen::Index k = 0; k < s.p.size(); ++k) out << ',' << format_double(s.p(k));
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / (stem + "_errors.csv"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot data to " + dir.string());
    out << "t";
    for (int k = 1; k <= log.edge_count; ++k) out << ",ze_" << k;
    out << ",ze_norm\n";
    for (const auto& s : log.samples) {
      out << format_double(s.t);
      for (Eigen::Index k = 0; k < s.z.size(); ++k) out << ',' << format_double(s.z(k));
      out << ',' << format_double(s.z.norm()) << '\n';
    }
  }
}

std::string emit_summary(const TrajectoryLog& log, const Scenario& scenario,
                         const FtissConstants& desired_consts) {
  std::ostringstream os;
  os << "scenario: " << scenario.name << "\n";
  os << "agents: " << scenario.agent_count() << " (" << scenario.graph.leader_count()
     << " leaders), edges: " << scenario.graph.edge_count() << "\n";
  os << "constants at desired formation: lambda+ = " << format_double(desired_consts.lambda_plus)
     << ", |Hbar Mbar| = " << format_double(desired_consts.hm_norm)
     << ", gate coeff = " << format_double(desired_consts.gate_coeff)
     << ", decay coeff = " << format_double(desired_consts.decay_coeff) << "\n";
  if (log.samples.empty()) return os.str();

  const Sample& last = log.samples.back();
  os << "samples: " << log.samples.size() << ", final t = " << format_double(last.t) << "\n";
  os << "final |z_e| = " << format_double(last.z.norm()) << ", V1 = " << format_double(last.V1)
     << ", V = " << format_double(last.V) << "\n";
  for (const double eps : {1e-1, 1e-2, 1e-3}) {
    const auto tc = convergence_time(log, eps);
    os << "convergence time (eps = " << eps << "): "
       << (tc ? format_double(*tc) + " s" : std::string("not reached")) << "\n";
  }
  std::size_t gated = 0;
  for (const auto& s : log.samples) gated += s.gate ? 1 : 0;
  os << "FTISS gate active at " << gated << " of " << log.samples.size() << " samples\n";

  const Eigen::VectorXd west = global_estimates(scenario, last.estimate);
  for (int i = scenario.graph.leader_count(); i < scenario.agent_count(); ++i) {
    const Vec3 target = total_disturbance_target(scenario, i);
    const Vec3 w = west.segment<3>(3 * i);
    os << "follower " << i + 1 << ": global estimate [" << format_double(w.x()) << ", "
       << format_double(w.y()) << ", " << format_double(w.z()) << "], target ["
       << format_double(target.x()) << ", " << format_double(target.y()) << ", "
       << format_double(target.z()) << "], error " << format_double((w - target).norm()) << "\n";
  }
  return os.str();
}

}  // namespace ftiss
