#pragma once

// Command-line surface: build, convert, verify, evolve, spectrum, search,
// dump. Exit codes: 0 ok, 2 validation failure, 3 certification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwalk/equivalence.hpp"
#include "qwalk/io.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/simulate.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk::cli {

using json = nlohmann::json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_uncertified = 3;

struct Options {
  std::string family = "coined";
  std::string graph;
  std::string partitions;
  std::string coin = "grover";
  double theta1 = pi / 4;
  double theta2 = pi / 4;
  std::vector<std::string> marked;
  std::size_t steps = 0;
  double tol = -1.0;  // negative: use the certificate's own tolerance
  std::string out;
  std::string format = "json";
  std::string from;
  std::string to;
  bool certify = false;
  bool square = false;
  std::string initial;
};

namespace detail {

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline io::ModelConfig config_for(const Options& o, const std::string& family) {
  io::ModelConfig c;
  c.family = io::parse_family(family);
  if (!o.graph.empty()) c.graph = io::load_json(o.graph);
  if (!o.partitions.empty()) c.partitions = io::load_json(o.partitions);
  c.coin = o.coin;
  c.theta1 = o.theta1;
  c.theta2 = o.theta2;
  c.marked = o.marked;
  c.seed = seed_from_env();
  return c;
}

class Output {
 public:
  explicit Output(std::ostream& fallback) : fallback_(fallback) {}
  void write(const std::string& path, const std::string& text) {
    if (path.empty()) {
      fallback_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write output file", path);
    f << text;
  }

 private:
  std::ostream& fallback_;
};

inline json certificate_json(const EquivalenceCertificate& c, const std::string& from, const std::string& to) {
  json j;
  j["from"] = from;
  j["to"] = to;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["residual"] = c.residual;
  j["alt_residual"] = std::isnan(c.alt_residual) ? json(nullptr) : json(c.alt_residual);
  j["tolerance"] = c.tolerance;
  j["verdict"] = c.verdict;
  return j;
}

inline json walk_summary(const WalkOperator& w) {
  json j;
  j["provenance"] = w.provenance;
  j["dimension"] = w.dimension();
  j["nonzeros"] = w.matrix.nonZeros();
  j["unitarity_defect"] = unitarity_defect(w.matrix);
  j["labels"] = w.basis.labels();
  return j;
}

struct Conversion {
  EquivalenceCertificate certificate;
  json target;
  std::vector<std::size_t> map;
};

inline Conversion convert(const Options& o) {
  using io::Family;
  const auto from = io::parse_family(o.from);
  const auto to = io::parse_family(o.to);
  Conversion c;
  if ((from == Family::coined && to == Family::szegedy) || (from == Family::szegedy && to == Family::coined)) {
    auto cfg = config_for(o, "coined");
    const auto h = io::read_graph(io::detail::need(cfg.graph, "--graph"));
    const auto marked = io::detail::resolve_marked(o.marked, h.names());
    auto se = szegedy_search_equivalence(h, {}, marked);
    c.certificate = se.certificate;
    c.target = walk_summary(from == Family::coined ? se.szegedy.reduced.w : se.coined.gamma);
    c.map = se.szegedy.dup.arc_of_edge;
    return c;
  }
  const auto m = io::build_model(config_for(o, o.from));
  if (from == Family::two_partition && to == Family::staggered) {
    auto r = partition_to_staggered(std::get<TwoPartitionWalk>(m.data));
    c = {r.certificate, walk_summary(r.walk.u), r.phi.forward()};
  } else if (from == Family::two_partition && to == Family::bipartite) {
    auto r = partition_to_bipartite(std::get<TwoPartitionWalk>(m.data));
    c = {r.certificate, walk_summary(r.walk.w), r.gamma_e.forward()};
  } else if (from == Family::bipartite && to == Family::coined) {
    auto r = bipartite_to_twostep_coined(std::get<BipartiteWalk>(m.data));
    c = {r.certificate, walk_summary(r.walk.gamma), r.xi_x.forward()};
  } else if (from == Family::coined && to == Family::bipartite) {
    auto r = coined_square_to_bipartite(std::get<CoinedWalk>(m.data));
    c = {r.certificate, walk_summary(r.walk.w), r.eta.forward()};
    c.target["crossing_relation"] = r.crossing_ok;
  } else if (from == Family::coined && to == Family::two_partition) {
    const auto& w = std::get<CoinedWalk>(m.data);
    auto p = twostep_as_two_partition(w);
    const Mat g = w.gamma.dense();
    std::vector<std::size_t> id(w.arcs.size());
    std::iota(id.begin(), id.end(), 0);
    c = {certify(p.u.dense(), g * g, BasisBijection(id, id.size()), p.u.provenance, "coined^2"), walk_summary(p.u), id};
  } else if (from == Family::lattice && to == Family::coined) {
    auto r = vertex_arc_intertwine(std::get<LatticeWalk>(m.data));
    c = {r.certificate, walk_summary(r.arc_walk.gamma), r.gamma.forward()};
  } else {
    throw Error("no converter from " + o.from + " to " + o.to, "--to");
  }
  return c;
}

inline int run_convert(const Options& o, Output& out, bool always_certify) {
  auto c = convert(o);
  if (o.tol >= 0.0) {
    c.certificate.tolerance = o.tol;
    c.certificate.verdict = c.certificate.residual <= o.tol;
  }
  json j = certificate_json(c.certificate, o.from, o.to);
  if (!always_certify) j["target"] = c.target;
  j["map"] = c.map;
  out.write(o.out, j.dump(2) + "\n");
  const bool enforce = always_certify || o.certify;
  return enforce && !c.certificate.verdict ? exit_uncertified : exit_ok;
}

inline int run_build(const Options& o, Output& out) {
  const auto m = io::build_model(config_for(o, o.family));
  json j = walk_summary(m.walk);
  j["family"] = io::family_name(m.family);
  json loc = json::object();
  // Locality is a property of the factors, not of the product.
  if (auto* w = std::get_if<TwoPartitionWalk>(&m.data)) {
    loc["pi1"] = is_local(w->e_op.matrix, w->omega.pi1, tol::verification);
    loc["pi2"] = is_local(w->f_op.matrix, w->omega.pi2, tol::verification);
  } else if (auto* b = std::get_if<BipartiteWalk>(&m.data)) {
    loc["x"] = is_local(b->rx.matrix, b->rx.partition, tol::verification);
    loc["y"] = is_local(b->ry.matrix, b->ry.partition, tol::verification);
  } else if (auto* s = std::get_if<SzegedyWalk>(&m.data)) {
    loc["x"] = is_local(s->full.rx.matrix, s->full.rx.partition, tol::verification);
    loc["y"] = is_local(s->full.ry.matrix, s->full.ry.partition, tol::verification);
  } else if (auto* c = std::get_if<CoinedWalk>(&m.data)) {
    loc["coin"] = is_local(c->coin.matrix, c->coin.partition, tol::verification);
    loc["shift"] = is_local(c->shift.matrix, c->shift.partition, tol::verification);
  } else if (auto* st = std::get_if<StaggeredWalk>(&m.data)) {
    loc["T1"] = is_local(st->e_op.matrix, st->cover.tess1, tol::verification);
    loc["T2"] = is_local(st->f_op.matrix, st->cover.tess2, tol::verification);
  } else if (auto* lw = std::get_if<LatticeWalk>(&m.data)) {
    loc["vertex"] = is_local(lw->coin, m.classes, tol::verification);
  } else if (auto* cmv = std::get_if<CmvWalk>(&m.data)) {
    j["bandwidth"] = bandwidth(cmv->cmv);
  }
  j["locality"] = loc;
  j["classes"] = m.class_labels;
  out.write(o.out, j.dump(2) + "\n");
  return exit_ok;
}

inline int run_dump(const Options& o, Output& out) {
  const auto m = io::build_model(config_for(o, o.family));
  const auto& a = m.walk.matrix;
  if (o.format == "csv") {
    std::string s = "row,col,re,im\n";
    for (Eigen::Index r = 0; r < a.outerSize(); ++r)
      for (SpMat::InnerIterator it(a, r); it; ++it)
        s += std::to_string(it.row()) + "," + std::to_string(it.col()) + "," + num(it.value().real()) + "," +
             num(it.value().imag()) + "\n";
    out.write(o.out, s);
  } else {
    json j;
    j["dimension"] = m.walk.dimension();
    j["labels"] = m.walk.basis.labels();
    json entries = json::array();
    for (Eigen::Index r = 0; r < a.outerSize(); ++r)
      for (SpMat::InnerIterator it(a, r); it; ++it)
        entries.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
    j["entries"] = entries;
    out.write(o.out, j.dump(2) + "\n");
  }
  return exit_ok;
}

inline StateVector initial_state(const io::Model& m, const Options& o) {
  if (o.initial.empty()) return m.initial;
  return StateVector::delta(m.walk.basis, m.walk.basis.index(o.initial));
}

inline std::string classes_path(const std::string& out) { return out + ".classes.csv"; }

inline int run_evolve(const Options& o, Output& out) {
  const auto m = io::build_model(config_for(o, o.family));
  const auto run = evolve(m.walk, initial_state(m, o), o.steps, m.classes);
  const auto& labels = m.walk.basis.labels();
  if (o.format == "csv") {
    std::string s = "step,label,probability\n", c = "step,class,probability\n";
    for (std::size_t n = 0; n < run.mu.size(); ++n) {
      for (std::size_t k = 0; k < labels.size(); ++k)
        s += std::to_string(n) + "," + labels[k] + "," + num(run.mu[n](static_cast<Eigen::Index>(k))) + "\n";
      for (std::size_t k = 0; k < m.class_labels.size(); ++k)
        c += std::to_string(n) + "," + m.class_labels[k] + "," + num(run.class_mu[n](static_cast<Eigen::Index>(k))) + "\n";
    }
    out.write(o.out, s);
    if (!o.out.empty()) out.write(classes_path(o.out), c);
  } else {
    json j;
    j["steps"] = o.steps;
    j["labels"] = labels;
    j["classes"] = m.class_labels;
    json mu = json::array(), cm = json::array();
    for (std::size_t n = 0; n < run.mu.size(); ++n) {
      mu.push_back(std::vector<double>(run.mu[n].data(), run.mu[n].data() + run.mu[n].size()));
      cm.push_back(std::vector<double>(run.class_mu[n].data(), run.class_mu[n].data() + run.class_mu[n].size()));
    }
    j["mu"] = mu;
    j["class_mu"] = cm;
    out.write(o.out, j.dump(2) + "\n");
  }
  return exit_ok;
}

inline int run_search(const Options& o, Output& out) {
  const auto m = io::build_model(config_for(o, o.family));
  if (m.family != io::Family::szegedy && m.family != io::Family::coined && m.family != io::Family::staggered)
    throw Error("search needs --family szegedy, coined or staggered", "--family");
  const auto psi0 = initial_state(m, o);
  const auto tr = o.marked.empty() ? unmarked_trace(m.walk, psi0, o.steps, m.classes)
                                   : search_trace(m.walk, psi0, m.target, o.steps, m.classes);
  if (o.format == "csv") {
    std::string s = "step,success\n";
    for (std::size_t n = 0; n < tr.success.size(); ++n) s += std::to_string(n) + "," + num(tr.success[n]) + "\n";
    out.write(o.out, s);
  } else {
    json j;
    std::vector<std::string> target;
    for (auto t : tr.target) target.push_back(m.walk.basis.label(t));
    j["target"] = target;
    j["success"] = tr.success;
    j["argmax"] = tr.argmax;
    j["peak"] = tr.peak;
    out.write(o.out, j.dump(2) + "\n");
  }
  return exit_ok;
}

inline json spaces_json(const SpectralMapResult& r) {
  json spaces = json::array();
  for (const auto& s : r.spaces) {
    json e;
    e["phase"] = s.phase;
    e["mult"] = s.vectors.cols();
    e["origin"] = s.origin == EigenOrigin::inherited ? "inherited" : "birth";
    e["value"] = complex_json(s.value);
    if (!std::isnan(s.t_value)) e["t_value"] = s.t_value;
    spaces.push_back(e);
  }
  return spaces;
}

inline int run_spectrum(const Options& o, Output& out) {
  const auto m = io::build_model(config_for(o, o.family));
  Mat u = m.walk.dense();
  if (o.square) u = u * u;
  const auto eig = eig_unitary(u);
  json j;
  json dense = json::array();
  std::vector<double> oracle;
  for (const auto& e : eig) {
    dense.push_back(e.phase);
    oracle.push_back(e.phase);
  }
  j["phases"] = dense;
  if (const auto* c = std::get_if<CoinedWalk>(&m.data)) {
    const auto r = o.square ? spectrum_of_square(*c) : spectral_map(*c);
    j["T_eigs"] = std::vector<double>(r.t_values.data(), r.t_values.data() + r.t_values.size());
    j["U_eigs"] = spaces_json(r);
    j["dims"] = {{"inherited", r.dim_inherited},
                 {"birth_plus", r.dim_birth_plus},
                 {"birth_minus", r.dim_birth_minus},
                 {"total", r.total_dimension()}};
    j["oracle_distance"] = phase_multiset_distance(r.phases(), oracle);
  }
  out.write(o.out, j.dump(2) + "\n");
  return exit_ok;
}

inline void add_model_options(CLI::App* a, Options& o) {
  a->add_option("--family", o.family, "walk family");
  a->add_option("--graph", o.graph, "graph / bipartite / hypergraph / torus / CMV JSON file");
  a->add_option("--partitions", o.partitions, "partition-pair JSON file");
  a->add_option("--coin", o.coin, "grover, random, identity, cut, flip, adjacency, reflection");
  a->add_option("--theta1", o.theta1, "staggered angle on T1");
  a->add_option("--theta2", o.theta2, "staggered angle on T2");
  a->add_option("--marked", o.marked, "marked vertex ids")->delimiter(',');
  a->add_option("--out", o.out, "output file (default stdout)");
  a->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  a->add_option("--initial", o.initial, "basis label of a localized initial state");
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Discrete-time quantum walks: build, convert, certify, simulate"};
  app.require_subcommand(1);
  Options o;
  auto* build = app.add_subcommand("build", "build a walk and report its checks");
  auto* convert = app.add_subcommand("convert", "convert a walk to another family");
  auto* verify = app.add_subcommand("verify", "certify a conversion (exit 3 on failure)");
  auto* evolve_cmd = app.add_subcommand("evolve", "record probability distributions");
  auto* spectrum = app.add_subcommand("spectrum", "eigenphases and the spectral map");
  auto* search = app.add_subcommand("search", "success probability for marked vertices");
  auto* dump = app.add_subcommand("dump", "write the walk operator");
  for (auto* a : {build, convert, verify, evolve_cmd, spectrum, search, dump}) detail::add_model_options(a, o);
  for (auto* a : {convert, verify}) {
    a->add_option("--from", o.from, "source family")->required();
    a->add_option("--to", o.to, "target family")->required();
    a->add_option("--tol", o.tol, "certificate tolerance");
  }
  convert->add_flag("--certify", o.certify, "exit 3 when the certificate fails");
  for (auto* a : {evolve_cmd, search}) a->add_option("--steps", o.steps, "number of steps");
  spectrum->add_flag("--square", o.square, "spectrum of the two-step operator");

  std::ostringstream cli_out, cli_err;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? exit_ok : exit_invalid;
  }

  detail::Output sink(out);
  try {
    if (build->parsed()) return detail::run_build(o, sink);
    if (convert->parsed()) return detail::run_convert(o, sink, false);
    if (verify->parsed()) return detail::run_convert(o, sink, true);
    if (evolve_cmd->parsed()) return detail::run_evolve(o, sink);
    if (spectrum->parsed()) return detail::run_spectrum(o, sink);
    if (search->parsed()) return detail::run_search(o, sink);
    if (dump->parsed()) return detail::run_dump(o, sink);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::bad_variant_access&) {
    err << "error: --from family does not match the requested conversion\n";
    return exit_invalid;
  }
  return exit_invalid;
}

}  // namespace qwalk::cli
