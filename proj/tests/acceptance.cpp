// Acceptance run: one PASS/FAIL line per criterion. Pass the path of the
// qwalk executable as the first argument to check reruns across processes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "qwalk/cli.hpp"
#include "support.hpp"

namespace qwalk {
namespace {

using testing::complete;
using testing::cycle;
using testing::uniform_int;

struct Outcome {
  bool pass = true;
  std::string detail;
  double worst = 0.0;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
  void bound(double value, double limit, const std::string& what) {
    worst = std::max(worst, value);
    check(value <= limit, what + " = " + cli::detail::num(value));
  }
};

std::string g_cli;

// ---------------------------------------------------------------------------

Hypergraph random_hypergraph(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  std::vector<std::vector<VertexIndex>> hes;
  for (std::size_t e = 0; e < m; ++e) {
    std::vector<VertexIndex> he;
    for (VertexIndex v = 0; v < n; ++v)
      if (uniform_int(rng, 0, 2) == 0) he.push_back(v);
    if (he.empty()) he.push_back(uniform_int(rng, 0, n - 1));
    hes.push_back(std::move(he));
  }
  return Hypergraph(names, hes);
}

std::vector<Mat> random_hermitians(Rng& rng, const Partition& p) {
  std::vector<Mat> out;
  for (const auto& c : p.classes()) out.push_back(random_hermitian(c.size(), rng));
  return out;
}

void check_walk(Outcome& o, const WalkOperator& u, const std::vector<std::pair<const SpMat*, const Partition*>>& factors,
                const std::string& tag) {
  o.bound(unitarity_defect(u.matrix), 1e-10, tag + " unitarity defect");
  for (const auto& [m, p] : factors) o.check(is_local(*m, *p, 1e-10), tag + " factor not local");
}

Outcome unitarity_and_locality() {
  Outcome o;
  Rng rng(101);
  for (int k = 0; k < 200; ++k) {
    switch (k % 7) {
      case 0: {
        auto w = testing::random_two_partition(rng, uniform_int(rng, 1, 50), false);
        check_walk(o, w.u, {{&w.e_op.matrix, &w.omega.pi1}, {&w.f_op.matrix, &w.omega.pi2}}, "two-partition");
        break;
      }
      case 1: {
        auto h = testing::random_multigraph(rng, uniform_int(rng, 2, 10), uniform_int(rng, 0, 15));
        auto s = build_szegedy_search(h, testing::random_transition(rng, duplicate(h)), std::nullopt,
                                      {uniform_int(rng, 0, h.num_vertices() - 1)});
        check_walk(o, s.full.w, {{&s.full.rx.matrix, &s.full.rx.partition}, {&s.full.ry.matrix, &s.full.ry.partition}},
                   "szegedy");
        break;
      }
      case 2: {
        auto h = testing::random_multigraph(rng, uniform_int(rng, 2, 10), uniform_int(rng, 0, 15));
        std::optional<std::vector<Mat>> sb;
        if (uniform_int(rng, 0, 1)) {
          sb.emplace();
          for (std::size_t e = 0; e < h.num_edges(); ++e) sb->push_back(random_unitary(2, rng));
        }
        auto c = build_coined(h, testing::random_blocks(rng, coin_partition(h, nullptr)), sb);
        check_walk(o, c.gamma, {{&c.coin.matrix, &c.coin.partition}, {&c.shift.matrix, &c.shift.partition}}, "coined");
        break;
      }
      case 3: {
        auto pp = testing::random_partition_pair(rng, uniform_int(rng, 1, 50), false);
        auto cover = staggered_graph(pp).cover;
        auto h1 = random_hermitians(rng, cover.tess1);
        auto h2 = random_hermitians(rng, cover.tess2);
        std::uniform_real_distribution<double> th(0.0, 2 * pi);
        auto w = build_staggered(cover, h1, h2, th(rng), th(rng));
        check_walk(o, w.u, {{&w.e_op.matrix, &w.cover.tess1}, {&w.f_op.matrix, &w.cover.tess2}}, "staggered");
        break;
      }
      case 4: {
        auto h = random_hypergraph(rng, uniform_int(rng, 1, 8), uniform_int(rng, 1, 6));
        auto inc = hypergraph_incidence(h);
        auto w = build_hypergraph_walk(h, testing::random_blocks(rng, inc.partitions.pi1),
                                       testing::random_blocks(rng, inc.partitions.pi2));
        check_walk(o, w.u, {{&w.e_op.matrix, &w.omega.pi1}, {&w.f_op.matrix, &w.omega.pi2}}, "hypergraph");
        break;
      }
      case 5: {
        std::vector<std::size_t> dims{uniform_int(rng, 3, 12)};
        if (uniform_int(rng, 0, 1)) dims = {3, uniform_int(rng, 3, 4)};
        Torus t(dims);
        std::vector<Mat> coins;
        for (std::size_t x = 0; x < t.num_vertices(); ++x) coins.push_back(random_unitary(2 * t.dim(), rng));
        auto w = build_lattice(t, coins);
        const auto cls = Partition::from_keys<std::size_t>([&] {
          std::vector<std::size_t> keys;
          for (std::size_t s = 0; s < w.basis.size(); ++s) keys.push_back(s / w.components());
          return keys;
        }());
        check_walk(o, w.u, {{&w.coin, &cls}}, "lattice");
        break;
      }
      default: {
        std::uniform_real_distribution<double> r(0.0, 1.0), ph(-pi, pi);
        std::vector<cplx> g;
        for (std::size_t i = 0, n = uniform_int(rng, 1, 49); i < n; ++i) g.push_back(std::polar(r(rng), ph(rng)));
        auto c = build_cmv(g);
        o.bound(unitarity_defect(c.cmv), 1e-10, "cmv unitarity defect");
        o.check(bandwidth(c.cmv) <= 2, "cmv bandwidth");
        // Ŝ pairs sites (0,1),(2,3),…; Ĉ pairs (1,2),(3,4),….
        std::vector<std::size_t> ks, kc;
        for (std::size_t i = 0; i <= g.size(); ++i) {
          ks.push_back(i / 2);
          kc.push_back((i + 1) / 2);
        }
        o.check(is_local(to_sparse(c.shift), Partition::from_keys<std::size_t>(ks), 1e-10) &&
                    is_local(to_sparse(c.coin), Partition::from_keys<std::size_t>(kc), 1e-10),
                "cmv factor not local");
        break;
      }
    }
  }
  o.detail = o.pass ? "200 instances, max defect " + cli::detail::num(o.worst) : o.detail;
  return o;
}

Outcome conversion_diagram() {
  Outcome o;
  Rng rng(202);
  double conv = 0.0, comp = 0.0;
  for (int k = 0; k < 50; ++k) {
    auto w = testing::random_two_partition(rng, uniform_int(rng, 2, 20), true);
    auto st = partition_to_staggered(w);
    auto bi = partition_to_bipartite(w);
    auto co = bipartite_to_twostep_coined(bi.walk);
    auto du = coined_square_to_bipartite(co.walk);
    for (const auto* c : {&st.certificate, &bi.certificate, &co.certificate, &du.certificate}) {
      conv = std::max(conv, c->residual);
      o.bound(c->residual, 1e-10, c->lhs + " vs " + c->rhs);
    }
    o.check(du.crossing_ok, "crossing relation");
    auto r = composite_round_trip(w, 1e-9);
    for (const auto* c : {&r.partition_vs_coined, &r.staggered_vs_bipartite, &r.partition_vs_duplicated}) {
      comp = std::max(comp, c->residual);
      o.bound(c->residual, 1e-9, "composite " + c->lhs + " vs " + c->rhs);
    }
  }
  if (o.pass) o.detail = "50 walks, conversions " + cli::detail::num(conv) + ", composites " + cli::detail::num(comp);
  return o;
}

Outcome twostep_lemma() {
  Outcome o;
  Rng rng(303);
  for (int k = 0; k < 30; ++k) {
    auto g = testing::random_multigraph(rng, uniform_int(rng, 2, 8), uniform_int(rng, 0, 8));
    auto c = build_coined(g, testing::random_blocks(rng, coin_partition(g, nullptr)));
    auto p = twostep_as_two_partition(c);
    const Mat u = c.gamma.dense();
    const Mat fe = Mat(p.f_op.matrix) * Mat(p.e_op.matrix);
    o.bound(max_abs(fe - u * u), 1e-14, "F E vs U^2");
  }
  if (o.pass) o.detail = "30 walks, max entry difference " + cli::detail::num(o.worst);
  return o;
}

Outcome search_equivalence() {
  Outcome o;
  const std::vector<std::pair<MultiGraph, VertexIndex>> cases{
      {testing::sink_multigraph(), 2}, {cycle(3), 0}, {cycle(3), 2}, {complete(4), 1}, {complete(4), 3}};
  for (const auto& [h, m] : cases) {
    auto r = szegedy_search_equivalence(h, {}, {m});
    o.bound(r.certificate.residual, 1e-10, "search residual");
  }
  if (o.pass) o.detail = "double-edge graph, C3, K4; max residual " + cli::detail::num(o.worst);
  return o;
}

Outcome sink_fixed_points() {
  Outcome o;
  Rng rng(505);
  std::size_t edges = 0;
  for (int k = 0; k < 20; ++k) {
    auto h = testing::random_multigraph(rng, uniform_int(rng, 3, 8), uniform_int(rng, 0, 6));
    std::vector<VertexIndex> marked;
    for (VertexIndex v = 0; v < h.num_vertices(); ++v)
      if (uniform_int(rng, 0, 2) == 0) marked.push_back(v);
    if (marked.empty()) marked.push_back(0);
    if (marked.size() == h.num_vertices()) marked.pop_back();
    auto s = build_szegedy_search(h, testing::random_transition(rng, duplicate(h)), std::nullopt, marked);
    for (auto e : s.e3_edges) {
      Vec d = Vec::Zero(static_cast<Eigen::Index>(s.graph_m.num_edges()));
      d(static_cast<Eigen::Index>(e)) = 1.0;
      o.bound((s.full.w.matrix * d - d).cwiseAbs().maxCoeff(), 1e-14, "sink edge moved");
      ++edges;
    }
  }
  if (o.pass) o.detail = std::to_string(edges) + " sink edges, max deviation " + cli::detail::num(o.worst);
  return o;
}

void spectral_instance(Outcome& o, const CoinedWalk& c) {
  auto r = spectral_map(c);
  if (r.t_values.size() > 0) o.bound(r.t_values.cwiseAbs().maxCoeff() - 1.0, 1e-10, "sigma(T) outside [-1,1]");
  o.check(r.total_dimension() == c.arcs.size(), "dimension accounting");
  o.bound(phase_multiset_distance(r.phases(), testing::oracle_phases(c.gamma.dense())), 1e-9, "spectrum vs oracle");
}

Outcome spectral_map_check() {
  Outcome o;
  Rng rng(606);
  auto c4 = build_grover(cycle(4));
  auto r4 = spectral_map(c4);
  const double t4[] = {-1.0, 0.0, 0.0, 1.0};
  for (int k = 0; k < 4; ++k) o.bound(std::abs(r4.t_values(k) - t4[k]), 1e-12, "C4 sigma(T)");
  std::size_t pm1 = 0, pi_ = 0, mi = 0;
  for (const auto& sp : r4.spaces) {
    if (sp.origin != EigenOrigin::inherited) continue;
    const auto n = static_cast<std::size_t>(sp.vectors.cols());
    if (std::abs(std::abs(sp.value.real()) - 1.0) < 1e-12) pm1 += n;
    if (std::abs(sp.value - cplx(0, 1)) < 1e-12) pi_ += n;
    if (std::abs(sp.value - cplx(0, -1)) < 1e-12) mi += n;
  }
  o.check(pm1 == 2 && pi_ == 2 && mi == 2, "C4 inherited eigenvalues");
  spectral_instance(o, c4);
  spectral_instance(o, build_grover(complete(3)));
  int count = 2;
  for (int k = 0; count < 60; ++k) {
    auto g = testing::random_multigraph(rng, uniform_int(rng, 2, 10), uniform_int(rng, 0, 12));
    if (2 * g.num_edges() > 64) continue;
    if (k % 2 == 0) {
      spectral_instance(o, build_grover(g));
    } else {
      if (g.num_vertices() < 2) continue;
      spectral_instance(o, build_coined_search(g, uniform_coin_vectors(g), {uniform_int(rng, 0, g.num_vertices() - 1)},
                                               SearchCase::reflection_cut));
    }
    ++count;
  }
  if (o.pass) o.detail = std::to_string(count) + " walks incl. C4/K3, max deviation " + cli::detail::num(o.worst);
  return o;
}

Outcome vertex_arc() {
  Outcome o;
  Rng rng(707);
  for (auto dims : {std::vector<std::size_t>{4}, std::vector<std::size_t>{6}, std::vector<std::size_t>{3, 3}}) {
    Torus t(dims);
    o.bound(vertex_arc_intertwine(build_lattice_grover(t)).certificate.residual, 1e-12, "grover torus");
    std::vector<Mat> coins;
    for (std::size_t x = 0; x < t.num_vertices(); ++x) coins.push_back(random_unitary(2 * t.dim(), rng));
    o.bound(vertex_arc_intertwine(build_lattice(t, coins)).certificate.residual, 1e-12, "random-coin torus");
  }
  if (o.pass) o.detail = "N=4, N=6, 3x3; max residual " + cli::detail::num(o.worst);
  return o;
}

Outcome cmv() {
  Outcome o;
  Rng rng(808);
  for (std::size_t n = 1; n <= 20; ++n)
    o.check(testing::is_permutation_matrix(build_cmv(std::vector<cplx>(n, 0.0)).cmv, 0.0), "zero parameters");
  std::uniform_real_distribution<double> r(0.0, 1.0), ph(-pi, pi);
  for (int k = 0; k < 50; ++k) {
    std::vector<cplx> g;
    for (std::size_t i = 0, n = uniform_int(rng, 1, 30); i < n; ++i) g.push_back(std::polar(r(rng), ph(rng)));
    auto c = build_cmv(g);
    o.bound(unitarity_defect(c.cmv), 1e-10, "unitarity");
    o.check(bandwidth(c.cmv) <= 2, "bandwidth");
  }
  if (o.pass) o.detail = "20 zero, 50 random parameter sets";
  return o;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome simulation() {
  Outcome o;
  Rng rng(909);
  std::vector<std::pair<std::string, WalkOperator>> walks;
  walks.emplace_back("two-partition", testing::random_two_partition(rng, 30, false).u);
  walks.emplace_back("szegedy", build_szegedy_search(testing::sink_multigraph(), {}, std::nullopt, {2}).full.w);
  walks.emplace_back("coined", build_grover(testing::random_multigraph(rng, 8, 6)).gamma);
  TessellationCover k4{complete(4), Partition::from_classes(4, {{0, 1, 2, 3}}), Partition::from_classes(4, {{0}, {1}, {2}, {3}})};
  walks.emplace_back("staggered", build_staggered(k4, HamiltonianForm::adjacency, 0.7, 1.1, StaggeredSearch::query, {1}).u);
  walks.emplace_back("hypergraph", build_hypergraph_grover(random_hypergraph(rng, 6, 4)).u);
  walks.emplace_back("lattice", build_lattice_grover(Torus({5, 5})).u);
  {
    auto c = build_cmv({cplx(0.3, 0.1), cplx(-0.5, 0.2), 0.9, cplx(0.0, -0.4)});
    walks.emplace_back("cmv", WalkOperator::make(c.basis, to_sparse(c.cmv), "cmv"));
  }
  for (const auto& [tag, w] : walks) {
    auto psi = StateVector::make(w.basis, testing::random_unit(rng, w.dimension()));
    auto run = evolve(w, psi, 1000);
    double dev = 0.0;
    for (std::size_t n = 0; n < run.mu.size(); ++n)
      dev = std::max({dev, std::abs(run.mu[n].sum() - 1.0), std::abs(run.norms[n] - 1.0)});
    o.bound(dev, 1e-10, tag + " conservation");
  }

  const auto dir = std::filesystem::temp_directory_path() / "qwalk_acceptance";
  std::filesystem::create_directories(dir);
  const std::string parts = testing::data_path("example1_partitions.json");
  std::vector<std::string> outs;
  for (const char* tag : {"a", "b"}) {
    const std::string out = (dir / (std::string(tag) + ".csv")).string();
    outs.push_back(out);
    const std::string args = "evolve --family two_partition --partitions " + parts +
                             " --coin random --steps 50 --format csv --out " + out;
    ::setenv("QWALK_SEED", "4242", 1);
    int code;
    if (!g_cli.empty()) {
      code = std::system((g_cli + " " + args).c_str());
    } else {
      std::vector<std::string> a{"qwalk"};
      std::istringstream ss(args);
      for (std::string w; ss >> w;) a.push_back(w);
      std::vector<const char*> argv;
      for (const auto& s : a) argv.push_back(s.c_str());
      code = cli::cli_main(static_cast<int>(argv.size()), argv.data());
    }
    o.check(code == 0, "evolve run failed");
  }
  ::unsetenv("QWALK_SEED");
  const auto a = slurp(outs[0]), b = slurp(outs[1]);
  o.check(!a.empty() && a == b, "reruns differ");
  o.check(slurp(outs[0] + ".classes.csv") == slurp(outs[1] + ".classes.csv"), "class reruns differ");
  std::filesystem::remove_all(dir);
  if (o.pass)
    o.detail = "7 families x 1000 steps, max deviation " + cli::detail::num(o.worst) + "; " +
               (g_cli.empty() ? "in-process" : "two processes") + " reruns identical";
  return o;
}

}  // namespace
}  // namespace qwalk

int main(int argc, char** argv) {
  using namespace qwalk;
  if (argc > 1) g_cli = argv[1];
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"unitarity and locality", unitarity_and_locality},
      {"conversion diagram", conversion_diagram},
      {"two-step coined walk as two-partition walk", twostep_lemma},
      {"Szegedy search vs coined search", search_equivalence},
      {"sink fixed points", sink_fixed_points},
      {"spectral map", spectral_map_check},
      {"vertex/arc intertwining on tori", vertex_arc},
      {"CMV structure", cmv},
      {"simulation conservation and determinism", simulation},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
  }
  return failed ? 1 : 0;
}
