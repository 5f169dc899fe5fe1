#include "spinchain/expm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace spinchain {

namespace {

double one_norm(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade coefficients b_0..b_m of the diagonal [m/m] approximant of exp.
constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// 1-norm thresholds below which the [m/m] approximant is accurate to unit roundoff.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
CMatrix pade_low_order(const CMatrix& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  CMatrix power = ident;  // A^{2i}
  CMatrix u_inner = CMatrix::Zero(n, n);
  CMatrix v = CMatrix::Zero(n, n);
  for (std::size_t i = 0; 2 * i < N; ++i) {
    v += b[2 * i] * power;
    if (2 * i + 1 < N) u_inner += b[2 * i + 1] * power;
    power = power * a2;
  }
  const CMatrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

CMatrix pade13(const CMatrix& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * ident);
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                    b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix is not square");
  if (!a.allFinite()) throw std::invalid_argument("expm: non-finite entry");
  const double norm = one_norm(a);
  if (norm <= kTheta3) return pade_low_order(a, kPade3);
  if (norm <= kTheta5) return pade_low_order(a, kPade5);
  if (norm <= kTheta7) return pade_low_order(a, kPade7);
  if (norm <= kTheta9) return pade_low_order(a, kPade9);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  CMatrix r = pade13(a / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

CMatrix expm_hermitian(const RMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(h);
  const RMatrix& vecs = eig.eigenvectors();
  const RVector& vals = eig.eigenvalues();
  CVector phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) phases[k] = std::polar(1.0, -vals[k] * dt);
  return vecs.cast<Complex>() * phases.asDiagonal() * vecs.transpose().cast<Complex>();
}

CMatrix unitary_step(const RMatrix& h, double dt, ExpmMethod method) {
  if (method == ExpmMethod::Eigen) return expm_hermitian(h, dt);
  return expm(Complex(0.0, -dt) * h.cast<Complex>());
}

}  // namespace spinchain
