#include <doctest.h>

#include "qmini/mesh.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

using namespace qmini;

TEST_SUITE("mesh") {

TEST_CASE("level to subdivisions") {
  CHECK(subdivisions_for_level(1) == 4);
  CHECK(subdivisions_for_level(6) == 128);
  const Mesh m = build_structured_mesh(subdivisions_for_level(1));
  CHECK(m.element_count() == 16);
  CHECK(m.vertex_count() == 25);
}

TEST_CASE("vertex layout and element orientation") {
  const Mesh m = build_structured_mesh(2);
  CHECK(m.vertex(0).x == 0.0);
  CHECK(m.vertex(1).x == 0.5);
  CHECK(m.vertex(3).y == 0.5);
  const std::array<int, 4> first = {0, 1, 4, 3};
  CHECK(m.element(0) == first);
  for (int k = 0; k < m.element_count(); ++k) {
    const auto& e = m.element(k);
    double area2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      const Point a = m.vertex(e[static_cast<std::size_t>(i)]);
      const Point b = m.vertex(e[static_cast<std::size_t>((i + 1) % 4)]);
      area2 += a.x * b.y - b.x * a.y;
    }
    CHECK(area2 > 0.0);  // counterclockwise
  }
}

TEST_CASE("boundary flags") {
  const Mesh m = build_structured_mesh(4);
  int boundary = 0;
  for (int v = 0; v < m.vertex_count(); ++v) boundary += m.is_boundary_vertex(v) ? 1 : 0;
  CHECK(boundary == 16);
  CHECK(!m.is_boundary_vertex(6));
  CHECK(m.is_boundary_vertex(4));
}

TEST_CASE("sheared elements are congruent parallelograms of total area one") {
  for (double shear : {0.0, 0.2, 0.25, 0.45}) {
    const Mesh m = build_structured_mesh(6, shear);
    double area = 0.0;
    const ElementGeometry g0 = element_geometry(m, 0);
    for (int k = 0; k < m.element_count(); ++k) {
      const auto& e = m.element(k);
      const Point a = m.vertex(e[0]);
      const Point b = m.vertex(e[1]);
      const Point c = m.vertex(e[2]);
      const Point d = m.vertex(e[3]);
      CHECK(std::abs((b.x - a.x) - (c.x - d.x)) <= 1e-12);
      CHECK(std::abs((b.y - a.y) - (c.y - d.y)) <= 1e-12);
      const ElementGeometry g = element_geometry(m, k);
      CHECK((g.jacobian - g0.jacobian).norm() <= 1e-12);
      area += g.det;
      // The affine map sends reference corners to the element vertices.
      const Point mc = g.map(1.0, 1.0);
      CHECK(std::abs(mc.x - c.x) <= 1e-12);
      CHECK(std::abs(mc.y - c.y) <= 1e-12);
      CHECK((g.inverse_transpose * g.jacobian.transpose() - Eigen::Matrix2d::Identity()).norm() <= 1e-12);
    }
    CHECK(std::abs(area - 1.0) <= 1e-12);
  }
}

TEST_CASE("invalid meshes are rejected") {
  CHECK_THROWS_AS(build_structured_mesh(0), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_mesh(2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_mesh(2, -0.1), std::invalid_argument);
}

TEST_CASE("dof counts") {
  const Mesh m = build_structured_mesh(4);
  const DofMap d = build_dof_maps(m);
  CHECK(d.velocity_scalar_count() == 25 + 16);
  CHECK(d.velocity_vector_count() == 2 * 41);
  CHECK(d.pressure_count() == 25);
  CHECK(d.interior_scalar_count() == 9 + 16);
  CHECK(d.interior_vector_count() == 50);
}

TEST_CASE("interior numbering is a dense order-preserving relabelling") {
  const Mesh m = build_structured_mesh(5, 0.1);
  const DofMap d = build_dof_maps(m);
  int expected = 0;
  for (int s = 0; s < d.velocity_scalar_count(); ++s) {
    const bool boundary = !d.is_bubble_dof(s) && m.is_boundary_vertex(s);
    if (boundary) {
      CHECK(d.interior_index(s) == -1);
      CHECK(d.interior_vector_dof(1, s) == -1);
    } else {
      CHECK(d.interior_index(s) == expected);
      CHECK(d.interior_vector_dof(1, s) == d.interior_scalar_count() + expected);
      ++expected;
    }
  }
  CHECK(expected == d.interior_scalar_count());
}

TEST_CASE("element dofs list the vertices then the bubble") {
  const Mesh m = build_structured_mesh(3);
  const DofMap d = build_dof_maps(m);
  std::set<int> bubbles;
  for (int k = 0; k < m.element_count(); ++k) {
    const auto local = d.element_velocity_dofs(m, k);
    for (int i = 0; i < 4; ++i) CHECK(local[static_cast<std::size_t>(i)] == m.element(k)[static_cast<std::size_t>(i)]);
    CHECK(d.is_bubble_dof(local[4]));
    CHECK(local[4] == d.bubble_dof(k));
    bubbles.insert(local[4]);
  }
  CHECK(bubbles.size() == static_cast<std::size_t>(m.element_count()));
  CHECK(d.vector_dof(1, 3) == d.velocity_scalar_count() + 3);
}

}  // TEST_SUITE
