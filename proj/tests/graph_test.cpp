#include <Eigen/Dense>

#include "doctest.h"
#include "ftiss/errors.hpp"
#include "ftiss/graph.hpp"
#include "support.hpp"

using namespace ftiss;

namespace {

int rank_of(const Eigen::MatrixXi& h) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(h.cast<double>());
  return static_cast<int>(lu.rank());
}

FormationGraph triangle() { return FormationGraph(3, 2, {{0, 1}, {1, 2}, {2, 0}}); }
FormationGraph path3() { return FormationGraph(3, 2, {{0, 1}, {1, 2}}); }

ErrorCode construction_error(int n, int leaders, std::vector<Edge> edges) {
  try {
    FormationGraph g(n, leaders, std::move(edges));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("graph accepted");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("incidence matrix follows head +1 / tail -1") {
  const FormationGraph g(2, 2, {{0, 1}});
  Eigen::MatrixXi expected(1, 2);
  expected << 1, -1;
  CHECK(g.incidence() == expected);
  CHECK(incidence_matrix(g) == expected);
}

TEST_CASE("incidence rank and kernel") {
  CHECK(rank_of(path3().incidence()) == 2);
  CHECK((triangle().incidence() * Eigen::VectorXi::Ones(3)).isZero());

  // Every connected test graph: H 1 = 0 exactly and rank n - 1.
  for (int n = 2; n <= 7; ++n) {
    const auto g = testing::complete_graph(n, 2);
    CHECK((g.incidence() * Eigen::VectorXi::Ones(n)).isZero());
    CHECK(rank_of(g.incidence()) == n - 1);
  }
  const auto hex = testing::bundled("hexagon").graph;
  CHECK((hex.incidence() * Eigen::VectorXi::Ones(6)).isZero());
  CHECK(rank_of(hex.incidence()) == 5);
}

TEST_CASE("neighbors") {
  CHECK(triangle().neighbors(0) == std::vector<int>{1, 2});
  CHECK(FormationGraph(2, 2, {{0, 1}}).neighbors(1) == std::vector<int>{0});
  CHECK(path3().neighbors(1) == std::vector<int>{0, 2});
  const FormationGraph path = path3();
  const auto& inc = path.incident(1);
  REQUIRE(inc.size() == 2);
  CHECK(inc[0].edge == 0);
  CHECK(inc[1].edge == 1);
}

TEST_CASE("graph validation") {
  CHECK(construction_error(3, 2, {{0, 1}}) == ErrorCode::DisconnectedGraph);
  CHECK(construction_error(3, 2, {{0, 1}, {1, 3}}) == ErrorCode::UnknownVertex);
  CHECK(construction_error(3, 2, {{0, 1}, {1, 1}, {1, 2}}) == ErrorCode::InvalidGraph);
  CHECK(construction_error(3, 2, {{0, 1}, {1, 0}, {1, 2}}) == ErrorCode::InvalidGraph);
  CHECK(construction_error(3, 0, {{0, 1}, {1, 2}}) == ErrorCode::InvalidGraph);
  CHECK(construction_error(3, 4, {{0, 1}, {1, 2}}) == ErrorCode::InvalidGraph);
}

TEST_CASE("leader structure") {
  const auto tet = testing::bundled("tetrahedron").graph;
  CHECK(tet.leader_count() == 2);
  CHECK(tet.follower_count() == 2);
  CHECK(tet.leading_leader_edges() == 1);
  const Eigen::MatrixXd m = follower_selector(tet);
  CHECK(m.diagonal() == Eigen::Vector4d(0, 0, 1, 1));
  CHECK(kron_identity3(m).rows() == 12);
  CHECK(kron_identity3(m).diagonal().sum() == 6.0);
}
