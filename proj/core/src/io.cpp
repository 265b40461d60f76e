#include "circlepat/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "circlepat/curvature.hpp"
#include "circlepat/errors.hpp"

namespace circlepat {
namespace {

using json = nlohmann::ordered_json;

std::string location_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    // Drop the library's own "[json.exception...] parse error at line L, column C: " prefix.
    if (auto p = msg.find("column "); p != std::string::npos) {
      if (auto q = msg.find(": ", p); q != std::string::npos) msg = msg.substr(q + 2);
    }
    throw ParseError(std::vector<ParseIssue>{{location_of(text, e.byte == 0 ? 0 : e.byte - 1), msg}});
  }
}

// Schema reader that records every problem instead of stopping at the first.
class Reader {
 public:
  std::vector<ParseIssue> issues;

  void issue(std::string where, std::string what) {
    issues.push_back({std::move(where), std::move(what)});
  }

  const json* member(const json& obj, const std::string& ptr, const char* key, bool required) {
    if (!obj.is_object()) {
      issue(ptr, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) issue(ptr + "/" + key, "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json* v, const std::string& ptr) {
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      issue(ptr, "expected a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
      issue(ptr, "expected a finite number");
      return std::nullopt;
    }
    return x;
  }

  std::optional<long long> integer(const json* v, const std::string& ptr) {
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      issue(ptr, "expected an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<std::string> string(const json* v, const std::string& ptr) {
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      issue(ptr, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<bool> boolean(const json* v, const std::string& ptr) {
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      issue(ptr, "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<Eigen::VectorXd> vector(const json* v, const std::string& ptr) {
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      issue(ptr, "expected an array of numbers");
      return std::nullopt;
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v->size()));
    bool ok = true;
    for (std::size_t i = 0; i < v->size(); ++i) {
      auto x = number(&(*v)[i], ptr + "/" + std::to_string(i));
      if (x) {
        out[static_cast<Eigen::Index>(i)] = *x;
      } else {
        ok = false;
      }
    }
    return ok ? std::optional<Eigen::VectorXd>(out) : std::nullopt;
  }

  std::vector<std::string> strings(const json* v, const std::string& ptr) {
    std::vector<std::string> out;
    if (!v) return out;
    if (!v->is_array()) {
      issue(ptr, "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (auto s = string(&(*v)[i], ptr + "/" + std::to_string(i))) out.push_back(*s);
    }
    return out;
  }
};

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json vector_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json problem_json(const ProblemFile& p) {
  const PatternComplex& cx = p.pattern.complex();
  json doc;
  doc["format"] = kProblemFormat;
  doc["pattern_type"] = {{"epsilon", p.pattern.type().epsilon()},
                         {"delta", p.pattern.type().delta()}};
  json faces = {{"count", cx.face_count()}};
  if (!cx.face_labels().empty()) {
    faces["labels"] = std::vector<std::string>(cx.face_labels().begin(), cx.face_labels().end());
  }
  doc["faces"] = faces;
  if (!p.vertex_labels.empty()) doc["vertices"] = {{"labels", p.vertex_labels}};
  json edges = json::array();
  for (const Edge& e : cx.edges()) {
    json je = {{"id", e.id}, {"face_a", e.face_a}, {"face_b", e.face_b},
               {"theta", p.pattern.theta(e.id)}};
    if (!cx.edge_labels().empty()) je["label"] = cx.edge_labels()[e.id];
    edges.push_back(je);
  }
  doc["edges"] = edges;
  doc["targets"] = vector_json(p.khat);
  if (p.initial_u) doc["initial_u"] = vector_json(*p.initial_u);
  doc["solver"] = {{"tol", p.solve.tol_residual},
                   {"max_iter", p.solve.max_iter},
                   {"backtrack", p.solve.backtrack},
                   {"armijo", p.solve.armijo},
                   {"domain_margin", p.solve.domain_margin}};
  doc["flow"] = {{"method", to_string(p.flow.method)},
                 {"integrator", to_string(p.flow.integrator)},
                 {"dt", p.flow.dt},
                 {"t_max", p.flow.t_max},
                 {"tol", p.flow.tol_residual},
                 {"sample_every", p.flow.sample_every},
                 {"adapt", p.flow.adapt},
                 {"min_dt", p.flow.min_dt}};
  return doc;
}

void read_solver(Reader& rd, const json& doc, SolveOptions& o) {
  const json* s = rd.member(doc, "", "solver", false);
  if (!s) return;
  const std::string p = "/solver";
  if (auto x = rd.number(rd.member(*s, p, "tol", false), p + "/tol")) o.tol_residual = *x;
  if (auto x = rd.integer(rd.member(*s, p, "max_iter", false), p + "/max_iter")) {
    o.max_iter = static_cast<int>(*x);
  }
  if (auto x = rd.number(rd.member(*s, p, "backtrack", false), p + "/backtrack")) o.backtrack = *x;
  if (auto x = rd.number(rd.member(*s, p, "armijo", false), p + "/armijo")) o.armijo = *x;
  if (auto x = rd.number(rd.member(*s, p, "domain_margin", false), p + "/domain_margin")) {
    o.domain_margin = *x;
  }
  try {
    o.check();
  } catch (const std::invalid_argument& e) {
    rd.issue(p, e.what());
  }
}

void read_flow(Reader& rd, const json& doc, FlowOptions& o) {
  const json* f = rd.member(doc, "", "flow", false);
  if (!f) return;
  const std::string p = "/flow";
  if (auto m = rd.string(rd.member(*f, p, "method", false), p + "/method")) {
    if (*m == "ricci") {
      o.method = FlowMethod::Ricci;
    } else if (*m == "calabi") {
      o.method = FlowMethod::Calabi;
    } else {
      rd.issue(p + "/method", "expected \"ricci\" or \"calabi\", got \"" + *m + "\"");
    }
  }
  if (auto m = rd.string(rd.member(*f, p, "integrator", false), p + "/integrator")) {
    if (*m == "rk4") {
      o.integrator = Integrator::RK4;
    } else if (*m == "euler") {
      o.integrator = Integrator::Euler;
    } else {
      rd.issue(p + "/integrator", "expected \"rk4\" or \"euler\", got \"" + *m + "\"");
    }
  }
  if (auto x = rd.number(rd.member(*f, p, "dt", false), p + "/dt")) o.dt = *x;
  if (auto x = rd.number(rd.member(*f, p, "t_max", false), p + "/t_max")) o.t_max = *x;
  if (auto x = rd.number(rd.member(*f, p, "tol", false), p + "/tol")) o.tol_residual = *x;
  if (auto x = rd.integer(rd.member(*f, p, "sample_every", false), p + "/sample_every")) {
    o.sample_every = static_cast<int>(*x);
  }
  if (auto x = rd.boolean(rd.member(*f, p, "adapt", false), p + "/adapt")) o.adapt = *x;
  if (auto x = rd.number(rd.member(*f, p, "min_dt", false), p + "/min_dt")) o.min_dt = *x;
  try {
    o.check();
  } catch (const std::invalid_argument& e) {
    rd.issue(p, e.what());
  }
}

ProblemFile problem_from_json(const json& doc) {
  Reader rd;
  if (!doc.is_object()) throw ParseError(std::vector<ParseIssue>{{"/", "expected a JSON object"}});

  if (auto fmt = rd.string(rd.member(doc, "", "format", true), "/format")) {
    if (*fmt != kProblemFormat) {
      rd.issue("/format", "unsupported format \"" + *fmt + "\", expected \"" +
                              std::string(kProblemFormat) + "\"");
    }
  }

  std::optional<PatternType> type;
  if (const json* pt = rd.member(doc, "", "pattern_type", true)) {
    auto eps = rd.integer(rd.member(*pt, "/pattern_type", "epsilon", true), "/pattern_type/epsilon");
    auto del = rd.integer(rd.member(*pt, "/pattern_type", "delta", true), "/pattern_type/delta");
    if (eps && del) {
      try {
        type = PatternType::make(static_cast<int>(*eps), static_cast<int>(*del));
      } catch (const DomainError& e) {
        rd.issue("/pattern_type", e.what());
      }
    }
  }

  std::optional<long long> face_count;
  std::vector<std::string> face_labels;
  if (const json* fj = rd.member(doc, "", "faces", true)) {
    face_count = rd.integer(rd.member(*fj, "/faces", "count", true), "/faces/count");
    if (face_count && *face_count <= 0) {
      rd.issue("/faces/count", "face count must be positive");
      face_count.reset();
    }
    face_labels = rd.strings(rd.member(*fj, "/faces", "labels", false), "/faces/labels");
  }

  std::vector<std::string> vertex_labels;
  if (const json* vj = rd.member(doc, "", "vertices", false)) {
    vertex_labels = rd.strings(rd.member(*vj, "/vertices", "labels", false), "/vertices/labels");
  }

  std::vector<Edge> edges;
  std::vector<double> theta_by_pos;
  std::vector<std::string> edge_labels;
  bool edges_ok = true;
  bool any_label = false;
  if (const json* ej = rd.member(doc, "", "edges", true)) {
    if (!ej->is_array()) {
      rd.issue("/edges", "expected an array of edges");
      edges_ok = false;
    } else {
      for (std::size_t i = 0; i < ej->size(); ++i) {
        const std::string p = "/edges/" + std::to_string(i);
        const json& e = (*ej)[i];
        auto id = rd.integer(rd.member(e, p, "id", true), p + "/id");
        auto fa = rd.integer(rd.member(e, p, "face_a", true), p + "/face_a");
        auto fb = rd.integer(rd.member(e, p, "face_b", true), p + "/face_b");
        auto th = rd.number(rd.member(e, p, "theta", true), p + "/theta");
        auto label = e.is_object() ? rd.string(rd.member(e, p, "label", false), p + "/label")
                                   : std::nullopt;
        if (!(id && fa && fb && th)) {
          edges_ok = false;
          continue;
        }
        edges.push_back({static_cast<int>(*id), static_cast<int>(*fa), static_cast<int>(*fb)});
        theta_by_pos.push_back(*th);
        any_label = any_label || label.has_value();
        edge_labels.push_back(label.value_or(""));
      }
    }
  } else {
    edges_ok = false;
  }

  auto khat = rd.vector(rd.member(doc, "", "targets", true), "/targets");
  if (khat) {
    for (Eigen::Index i = 0; i < khat->size(); ++i) {
      if (!((*khat)[i] > 0.0)) {
        rd.issue("/targets/" + std::to_string(i),
                 "target curvature at face " + std::to_string(i) + " must be positive, got " +
                     json((*khat)[i]).dump());
      }
    }
    if (face_count && khat->size() != *face_count) {
      rd.issue("/targets", std::to_string(khat->size()) + " targets for " +
                               std::to_string(*face_count) + " faces");
    }
  }

  std::optional<Eigen::VectorXd> initial;
  const json* iu = rd.member(doc, "", "initial_u", false);
  const json* ir = rd.member(doc, "", "initial_r", false);
  if (iu && ir) rd.issue("/initial_r", "give initial_u or initial_r, not both");
  if (iu) {
    initial = rd.vector(iu, "/initial_u");
    if (initial && !is_admissible(*initial)) {
      rd.issue("/initial_u", "initial u must lie in (-inf, 0) componentwise");
      initial.reset();
    }
  } else if (ir) {
    if (auto r = rd.vector(ir, "/initial_r")) {
      initial = Eigen::VectorXd(r->size());
      for (Eigen::Index i = 0; i < r->size(); ++i) (*initial)[i] = u_from_radius((*r)[i]);
      if (!is_admissible(*initial)) {
        rd.issue("/initial_r", "initial radii overflow the u coordinate");
        initial.reset();
      }
    }
  }
  if (initial && face_count && initial->size() != *face_count) {
    rd.issue(iu ? "/initial_u" : "/initial_r", "initial guess length does not match face count");
  }

  SolveOptions solve;
  FlowOptions flow;
  read_solver(rd, doc, solve);
  read_flow(rd, doc, flow);

  std::optional<PatternComplex> complex;
  if (face_count && edges_ok) {
    PatternComplex cx(static_cast<int>(*face_count), edges, face_labels,
                      any_label ? edge_labels : std::vector<std::string>{});
    const auto violations = validate(cx);
    for (const Violation& v : violations) {
      std::string where = "/edges";
      if (v.kind == Violation::Kind::IsolatedFace || v.kind == Violation::Kind::EmptyComplex) {
        where = "/faces";
      } else if (v.edge >= 0) {
        for (std::size_t i = 0; i < edges.size(); ++i) {
          if (edges[i].id == v.edge) {
            where = "/edges/" + std::to_string(i);
            break;
          }
        }
      }
      rd.issue(where, v.message);
    }
    if (violations.empty()) complex = std::move(cx);
  }

  if (type) {
    for (std::size_t i = 0; i < theta_by_pos.size(); ++i) {
      if (!theta_in_domain(type->delta(), theta_by_pos[i])) {
        std::string msg;
        if (type->delta() == 1) {
          msg = "θ must lie in (0, π) for delta = 1, got ";
        } else {
          msg = "θ must be positive for delta = " + std::to_string(type->delta()) + ", got ";
        }
        rd.issue("/edges/" + std::to_string(i) + "/theta", msg + json(theta_by_pos[i]).dump());
      }
    }
  }

  if (!rd.issues.empty()) throw ParseError(std::move(rd.issues));

  // Theta indexed by edge id; complex validation guarantees the ids are dense.
  std::vector<double> theta(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) theta[edges[i].id] = theta_by_pos[i];
  return ProblemFile{Pattern(std::move(*complex), *type, std::move(theta)), std::move(*khat),
                     std::move(initial), std::move(vertex_labels), solve, flow};
}

std::vector<int> int_list(Reader& rd, const json* v, const std::string& ptr) {
  std::vector<int> out;
  if (!v) return out;
  if (!v->is_array()) {
    rd.issue(ptr, "expected an array of integers");
    return out;
  }
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (auto x = rd.integer(&(*v)[i], ptr + "/" + std::to_string(i))) out.push_back(static_cast<int>(*x));
  }
  return out;
}

}  // namespace

bool operator==(const ProblemFile& a, const ProblemFile& b) {
  auto same = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return x.size() == y.size() && (x.array() == y.array()).all();
  };
  if (a.initial_u.has_value() != b.initial_u.has_value()) return false;
  if (a.initial_u && !same(*a.initial_u, *b.initial_u)) return false;
  return a.pattern == b.pattern && same(a.khat, b.khat) && a.vertex_labels == b.vertex_labels &&
         a.solve == b.solve && a.flow == b.flow;
}

ParseError::ParseError(std::vector<ParseIssue> issues)
    : std::runtime_error([&] {
        std::string s = "invalid document:";
        for (const auto& i : issues) s += "\n  " + i.location + ": " + i.message;
        return s;
      }()),
      issues_(std::move(issues)) {}

ProblemFile parse_problem(std::string_view text) { return problem_from_json(parse_json(text)); }

std::string print_problem(const ProblemFile& problem) { return problem_json(problem).dump(2) + "\n"; }

std::string problem_hash(const ProblemFile& problem) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : print_problem(problem)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ResultFile make_result(const ProblemFile& problem, const Eigen::VectorXd& u) {
  ResultFile res{.problem_hash = problem_hash(problem), .problem = problem};
  const CurvatureReport rep = curvature(problem.pattern, u, problem.khat);
  res.u = u;
  res.r.resize(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) res.r[i] = radius_from_u(u[i]);
  res.K = rep.K;
  res.beta = rep.beta;
  res.length = rep.length;
  res.residual_sup = rep.residual_sup;
  res.residual_l2 = rep.residual_l2;
  return res;
}

std::string print_result(const ResultFile& res) {
  json doc;
  doc["format"] = kResultFormat;
  doc["problem_hash"] = res.problem_hash;
  doc["command"] = res.command;
  doc["method"] = res.method;
  doc["converged"] = res.converged;
  doc["termination"] = res.termination;
  doc["iterations"] = res.iterations;
  doc["wall_time_s"] = res.wall_time_s;
  doc["u"] = vector_json(res.u);
  doc["r"] = vector_json(res.r);
  doc["K"] = vector_json(res.K);
  doc["beta"] = vector_json(res.beta);
  doc["length"] = vector_json(res.length);
  doc["residual"] = {{"sup", res.residual_sup}, {"l2", res.residual_l2}};
  doc["boundary"] = {{"toward_zero", res.toward_zero},
                     {"toward_neg_infinity", res.toward_neg_infinity}};
  if (!res.trajectory.empty()) {
    json rows = json::array();
    for (const TrajectoryRow& row : res.trajectory) {
      rows.push_back({row.t, row.residual_sup, row.energy, row.calabi});
    }
    doc["trajectory"] = {{"columns", {"t", "residual_sup", "ricci_energy", "calabi_energy"}},
                         {"rows", rows}};
  }
  if (res.radius_velocity) doc["radius_velocity"] = vector_json(*res.radius_velocity);
  if (res.fitted_log_calabi_rate) doc["fitted_log_calabi_rate"] = *res.fitted_log_calabi_rate;
  doc["problem"] = problem_json(res.problem);
  return doc.dump(2) + "\n";
}

ResultFile parse_result(std::string_view text) {
  const json doc = parse_json(text);
  Reader rd;
  if (!doc.is_object()) throw ParseError(std::vector<ParseIssue>{{"/", "expected a JSON object"}});
  if (auto fmt = rd.string(rd.member(doc, "", "format", true), "/format")) {
    if (*fmt != kResultFormat) rd.issue("/format", "unsupported format \"" + *fmt + "\"");
  }

  std::optional<ProblemFile> problem;
  if (const json* pj = rd.member(doc, "", "problem", true)) {
    try {
      problem = problem_from_json(*pj);
    } catch (const ParseError& e) {
      for (const auto& i : e.issues()) rd.issue("/problem" + i.location, i.message);
    }
  }

  ResultFile res{.problem = problem.value_or(ProblemFile{
                     Pattern(builtin_torus_grid(1, 1), PatternType::type_110(), {1.0, 1.0}),
                     Eigen::VectorXd::Ones(1), std::nullopt, {}, {}, {}})};
  res.problem_hash = rd.string(rd.member(doc, "", "problem_hash", true), "/problem_hash").value_or("");
  res.command = rd.string(rd.member(doc, "", "command", true), "/command").value_or("");
  res.method = rd.string(rd.member(doc, "", "method", true), "/method").value_or("");
  res.converged = rd.boolean(rd.member(doc, "", "converged", true), "/converged").value_or(false);
  res.termination = rd.string(rd.member(doc, "", "termination", true), "/termination").value_or("");
  res.iterations = static_cast<int>(
      rd.integer(rd.member(doc, "", "iterations", true), "/iterations").value_or(0));
  res.wall_time_s = rd.number(rd.member(doc, "", "wall_time_s", false), "/wall_time_s").value_or(0.0);
  res.u = rd.vector(rd.member(doc, "", "u", true), "/u").value_or(Eigen::VectorXd());
  res.r = rd.vector(rd.member(doc, "", "r", true), "/r").value_or(Eigen::VectorXd());
  res.K = rd.vector(rd.member(doc, "", "K", true), "/K").value_or(Eigen::VectorXd());
  auto to_std = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  res.beta = to_std(rd.vector(rd.member(doc, "", "beta", true), "/beta").value_or(Eigen::VectorXd()));
  res.length =
      to_std(rd.vector(rd.member(doc, "", "length", true), "/length").value_or(Eigen::VectorXd()));
  if (const json* rj = rd.member(doc, "", "residual", true)) {
    res.residual_sup = rd.number(rd.member(*rj, "/residual", "sup", true), "/residual/sup").value_or(0.0);
    res.residual_l2 = rd.number(rd.member(*rj, "/residual", "l2", true), "/residual/l2").value_or(0.0);
  }
  if (const json* bj = rd.member(doc, "", "boundary", false)) {
    res.toward_zero = int_list(rd, rd.member(*bj, "/boundary", "toward_zero", false),
                               "/boundary/toward_zero");
    res.toward_neg_infinity =
        int_list(rd, rd.member(*bj, "/boundary", "toward_neg_infinity", false),
                 "/boundary/toward_neg_infinity");
  }
  if (const json* tj = rd.member(doc, "", "trajectory", false)) {
    if (const json* rows = rd.member(*tj, "/trajectory", "rows", true)) {
      if (!rows->is_array()) {
        rd.issue("/trajectory/rows", "expected an array");
      } else {
        for (std::size_t i = 0; i < rows->size(); ++i) {
          const std::string p = "/trajectory/rows/" + std::to_string(i);
          auto row = rd.vector(&(*rows)[i], p);
          if (row && row->size() == 4) {
            res.trajectory.push_back({(*row)[0], (*row)[1], (*row)[2], (*row)[3]});
          } else if (row) {
            rd.issue(p, "expected 4 columns");
          }
        }
      }
    }
  }
  if (const json* rv = rd.member(doc, "", "radius_velocity", false)) {
    res.radius_velocity = rd.vector(rv, "/radius_velocity");
  }
  if (const json* fr = rd.member(doc, "", "fitted_log_calabi_rate", false)) {
    if (!fr->is_null()) res.fitted_log_calabi_rate = rd.number(fr, "/fitted_log_calabi_rate");
  }

  if (problem) {
    const auto n = problem->pattern.face_count();
    const auto ne = static_cast<std::size_t>(problem->pattern.edge_count());
    if (res.u.size() != n || res.r.size() != n || res.K.size() != n) {
      rd.issue("/u", "u, r and K must have one entry per face");
    } else if (!is_admissible(res.u)) {
      rd.issue("/u", "u must lie in (-inf, 0) componentwise");
    }
    if (res.beta.size() != 2 * ne) rd.issue("/beta", "beta must have two entries per edge");
    if (res.length.size() != ne) rd.issue("/length", "length must have one entry per edge");
    if (res.problem_hash != problem_hash(*problem)) {
      rd.issue("/problem_hash", "hash does not match the embedded problem");
    }
  }
  if (!rd.issues.empty()) throw ParseError(std::move(rd.issues));
  return res;
}

double result_consistency_error(const ResultFile& result) {
  const Eigen::VectorXd K = curvature_vector(result.problem.pattern, result.u);
  return (K - result.K).lpNorm<Eigen::Infinity>();
}

}  // namespace circlepat
