#include "doctest.h"

#include "coexist/error.hpp"
#include "coexist/linalg.hpp"

using namespace coexist;

TEST_CASE("symmetric eigenvalues are ascending") {
  Mat m(2, 2);
  m << 2, 1, 1, 2;
  const Vec ev = symmetric_eigenvalues(m);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(3.0));
  CHECK(min_eigenvalue(m) == doctest::Approx(1.0));
  CHECK(max_eigenvalue(m) == doctest::Approx(3.0));
  CHECK(spectral_norm(-m) == doctest::Approx(3.0));
}

TEST_CASE("symmetry and semidefiniteness tests") {
  Mat a(2, 2);
  a << 1, 2, 2.5, 1;
  CHECK_FALSE(is_symmetric(a));
  CHECK(is_psd(Mat::Zero(3, 3)));
  Mat b(2, 2);
  b << 1, 2, 2, 1;
  CHECK_FALSE(is_psd(b));
  CHECK(is_psd(Mat::Identity(2, 2)));
}

TEST_CASE("block diagonal placement") {
  const Mat a = Mat::Constant(1, 1, 2.0), b = Mat::Constant(2, 2, 3.0);
  const Mat d = block_diagonal({&a, &b});
  CHECK(d.rows() == 3);
  CHECK(d(0, 0) == 2.0);
  CHECK(d(2, 1) == 3.0);
  CHECK(d(0, 2) == 0.0);
}
