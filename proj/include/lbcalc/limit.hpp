#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lbcalc/dirichlet.hpp"
#include "lbcalc/germ.hpp"
#include "lbcalc/matrix.hpp"
#include "lbcalc/random.hpp"

namespace lbcalc::limit {

using dirichlet::DirichletSeries;
using germ::Germ;

using StepElement = std::variant<Matrix, DirichletSeries, Germ>;

enum class ElementKind { matrix, dirichlet, germ };

ElementKind kind_of(const StepElement& x) noexcept;
std::string_view kind_name(ElementKind kind) noexcept;

struct StepTerm {
  int step;
  StepElement element;
};

/// x = x_1 + ... + x_k with x_j in the step space E_{step_j}; steps are
/// strictly increasing and >= 1.
class StepDecomposition {
 public:
  StepDecomposition& add(int step, StepElement element);
  const std::vector<StepTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  int top_step() const noexcept { return terms_.empty() ? 0 : terms_.back().step; }

 private:
  std::vector<StepTerm> terms_;
};

/// An increasing sequence of normed spaces E_1 ⊆ E_2 ⊆ ... whose bonding
/// maps have operator norm <= 1.
struct DirectLimit {
  ElementKind kind;
  std::string name;
  /// Norm of an element of E_step. ConfigurationError for a foreign kind.
  std::function<double(int step, const StepElement&)> step_norm;
  /// The sum of a decomposition as an element of E_step (step >= top_step()).
  std::function<StepElement(const StepDecomposition&, int step)> sum;
  /// A random element of E_step with norm strictly below `bound` and close to `norm`.
  std::function<StepElement(int step, double norm, double bound, Rng&)> sample;
};

/// E_j = j x j matrices with the compatible norm; bonding by top-left embedding.
DirectLimit matrix_limit();
/// E_j = finitely supported series with norm_{s0 + j - 1}; bonding is the identity.
DirectLimit dirichlet_limit(double s0 = 0.0, std::size_t coeff_dim = 2);
/// E_j = germs of index j around the origin of C^dim with the sup majorant;
/// bonding is restriction.
DirectLimit germ_limit(std::size_t dim = 1, int degree = germ::kDefaultDegree);

/// Whether the explicit decomposition witnesses x ∈ V(delta): every term
/// has step norm < delta_step (open balls).
bool neighborhood_contains(const DirectLimit& limit, std::span<const double> delta, const StepDecomposition& x);

struct ContinuityCertificate {
  double R = 0.0;
  double r = 0.0;
  double epsilon = 0.0;
  std::vector<double> step_sups;  // S_n
  std::vector<double> a;          // r / 2^j
  std::vector<double> b;          // min(1, eps / (2^n S_n))
  std::vector<double> delta;      // a_n b_n
};

inline constexpr std::size_t kMaxCertificateSteps = 48;

/// Requires r < R/(2e) (DomainError) and positive finite S_n.
ContinuityCertificate build_certificate(std::vector<double> step_sups, double R, double r, double epsilon);

/// True iff every derived list matches the formulas exactly and the
/// partial sums of delta stay below r.
bool certificate_consistent(const ContinuityCertificate& cert);

/// A map f on a direct limit, f(0) = 0, with norms measured in a fixed
/// normed space F.
struct LimitMap {
  ElementKind kind;
  std::string name;
  /// ||f(x)||_F
  std::function<double(const StepElement&)> output_norm;
  /// Upper bound for sup ||f|| on the ball of radius R in E_step.
  std::function<double(int step, double R)> step_sup;
};

/// S_n = R/(R - 2er) * step_sup(n, R) for n = 1..steps.
std::vector<double> step_sups(const LimitMap& f, int steps, double R, double r);

LimitMap zero_map(ElementKind kind);
/// x |-> sum_k c_k (W x)^k with c given for k = 1, 2, ... and W = diag(1, 2, ...)
/// when `weighted`, else the identity.
LimitMap matrix_polynomial_map(std::vector<Complex> coeffs, bool weighted);
/// gamma |-> bracket(gamma0, gamma), measured with norm_{s_out}. The steps
/// used must have abscissa <= s_out.
LimitMap dirichlet_bracket_map(DirichletSeries gamma0, double s0, double s_out);
/// gamma |-> c gamma, measured with the sup majorant at index `out_index`,
/// which must be >= every step used.
LimitMap germ_scaling_map(Complex c, int out_index);

struct VerifyReport {
  double max_observed = 0.0;
  double epsilon = 0.0;
  std::size_t samples = 0;
  bool verdict = false;
  std::uint64_t seed = 0;
  double margin = 0.0;
  std::size_t violations = 0;
  /// Samples whose decomposition norms sum to >= r.
  std::size_t radius_breaches = 0;
  bool certificate_consistent = false;
};

/// Samples random decompositions in V(delta) and checks ||f(x)|| < epsilon
/// and sum_j ||x_j|| < r. A breach on a consistent certificate is an
/// InternalError.
VerifyReport verify_certificate(const DirectLimit& limit, const LimitMap& f, const ContinuityCertificate& cert,
                                std::size_t samples, std::uint64_t seed);

struct ModulusCheck {
  bool hypotheses = false;  // the input lies in the region the modulus speaks about
  double observed = 0.0;    // the norm to be bounded
  double bound = 0.0;       // the proof's chain of inequalities evaluated on the input
  bool holds = true;        // !hypotheses || observed < epsilon (germ scale: <=)
};

/// Tail sum_{n > n0} 1/n^2.
double inverse_square_tail(std::uint64_t n0);

struct DirichletModulus {
  int s = 0;
  int t = 0;
  int u = 0;
  double epsilon = 0.0;
  std::uint64_t n0 = 0;
  double tail = 0.0;
  double delta = 0.0;
};

/// t = s + 2, n0 minimal >= 1 with tail(n0) < eps/4, delta = n0^{t-u} eps/2.
DirichletModulus dirichlet_regularity_modulus(int s, double epsilon, int u);

/// For norm_s(g) < 2 and norm_u(g) < delta, checks norm_t(g) < eps.
ModulusCheck check_dirichlet_modulus(const DirichletModulus& modulus, const DirichletSeries& g);

/// Bounds s_k on the degree-k Taylor parts of the germs considered.
class DegreeSups {
 public:
  /// s_1, s_2, ... then zero.
  static DegreeSups finite(std::vector<double> values);
  /// s_k = c w^k.
  static DegreeSups geometric(double c, double w);
  /// The bound implied by sup majorant < 2 at index n: s_k = 2 n^k.
  static DegreeSups unit_ball_budget(int n);

  double operator()(int k) const;
  /// sum_{k > k0} s_k rho^k; +infinity if it diverges.
  double tail_after(int k0, double rho) const;

  bool is_geometric() const noexcept { return geometric_; }
  double c() const noexcept { return c_; }
  double w() const noexcept { return w_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  bool geometric_ = false;
  double c_ = 0.0;
  double w_ = 0.0;
  std::vector<double> values_;
};

/// 3/(3 - e)
double germ_modulus_constant();

struct GermModulus {
  int n = 0;
  int m = 0;
  int l = 0;
  double epsilon = 0.0;
  double D = 0.0;
  int k0 = 0;
  double tail = 0.0;
  double delta = 0.0;
  DegreeSups sups;
};

/// m = 6n, k0 minimal >= 1 with tail_after(k0, 1/(6n)) < eps/2,
/// delta = (1/D)(n/l)^{k0} eps/2. Requires l >= 6n.
GermModulus germ_regularity_modulus(int n, double epsilon, int l, const DegreeSups& sups);

/// (l/n)^{k0} D x + eps/2
double germ_chain_bound(const GermModulus& modulus, double x);

/// For a germ defined on U_n with majorant < 2 there, per-degree sums
/// <= s_k and majorant < delta at index l, checks majorant <= eps at index m.
ModulusCheck check_germ_modulus(const GermModulus& modulus, const Germ& g);

}  // namespace lbcalc::limit
