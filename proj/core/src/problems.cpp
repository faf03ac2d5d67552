#include "ritznet/problems.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ritznet {

CosineSolution::CosineSolution(Eigen::VectorXi wave, double amplitude)
    : wave_(std::move(wave)), amplitude_(amplitude) {
  if (wave_.size() < 1) throw std::invalid_argument("CosineSolution: empty wave vector");
  for (Eigen::Index i = 0; i < wave_.size(); ++i)
    if (wave_[i] < 0) throw std::invalid_argument("CosineSolution: wave numbers must be >= 0");
}

int CosineSolution::nonzero_modes() const {
  int r = 0;
  for (Eigen::Index i = 0; i < wave_.size(); ++i)
    if (wave_[i] != 0) ++r;
  return r;
}

double CosineSolution::value(const Eigen::VectorXd& x) const {
  double v = amplitude_;
  for (Eigen::Index i = 0; i < wave_.size(); ++i) v *= std::cos(M_PI * wave_[i] * x[i]);
  return v;
}

Eigen::VectorXd CosineSolution::gradient(const Eigen::VectorXd& x) const {
  const Eigen::Index d = wave_.size();
  Eigen::VectorXd cosv(d), sinv(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    cosv[i] = std::cos(M_PI * wave_[i] * x[i]);
    sinv[i] = std::sin(M_PI * wave_[i] * x[i]);
  }
  Eigen::VectorXd g(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double term = amplitude_ * (-M_PI * wave_[j]) * sinv[j];
    for (Eigen::Index i = 0; i < d; ++i)
      if (i != j) term *= cosv[i];
    g[j] = term;
  }
  return g;
}

Eigen::MatrixXd CosineSolution::hessian(const Eigen::VectorXd& x) const {
  const Eigen::Index d = wave_.size();
  Eigen::VectorXd cosv(d), sinv(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    cosv[i] = std::cos(M_PI * wave_[i] * x[i]);
    sinv[i] = std::sin(M_PI * wave_[i] * x[i]);
  }
  Eigen::MatrixXd h(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      double term = amplitude_;
      if (a == b) {
        term *= -(M_PI * wave_[a]) * (M_PI * wave_[a]);
        for (Eigen::Index i = 0; i < d; ++i) term *= (i == a) ? 1.0 : cosv[i];
        term *= cosv[a];
      } else {
        term *= (M_PI * wave_[a]) * (M_PI * wave_[b]) * sinv[a] * sinv[b];
        for (Eigen::Index i = 0; i < d; ++i)
          if (i != a && i != b) term *= cosv[i];
      }
      h(a, b) = term;
      h(b, a) = term;
    }
  }
  return h;
}

double CosineSolution::laplace_eigenvalue() const {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < wave_.size(); ++i)
    sq += static_cast<double>(wave_[i]) * wave_[i];
  return M_PI * M_PI * sq;
}

std::vector<BarronCosine> CosineSolution::cosine_expansion() const {
  const Eigen::Index d = wave_.size();
  std::vector<int> active;
  for (Eigen::Index i = 0; i < d; ++i)
    if (wave_[i] != 0) active.push_back(static_cast<int>(i));
  const int r = static_cast<int>(active.size());

  std::vector<BarronCosine> terms;
  if (r == 0) {
    BarronCosine t;
    t.frequency = Eigen::VectorXd::Zero(d);
    t.phase = 0.0;
    t.amplitude = amplitude_;
    terms.push_back(std::move(t));
    return terms;
  }
  // prod cos(theta_i) = 2^{-(r-1)} sum over sign patterns (first sign fixed
  // +1) of cos(theta_1 + e_2 theta_2 + ... + e_r theta_r).
  const int patterns = 1 << (r - 1);
  const double amp = amplitude_ / patterns;
  for (int mask = 0; mask < patterns; ++mask) {
    BarronCosine t;
    t.frequency = Eigen::VectorXd::Zero(d);
    t.frequency[active[0]] = M_PI * wave_[active[0]];
    for (int j = 1; j < r; ++j) {
      const double sign = (mask >> (j - 1)) & 1 ? -1.0 : 1.0;
      t.frequency[active[j]] = sign * M_PI * wave_[active[j]];
    }
    t.phase = 0.0;
    t.amplitude = amp;
    terms.push_back(std::move(t));
  }
  return terms;
}

double CosineSolution::declared_barron2() const {
  double l1 = 0.0;
  for (Eigen::Index i = 0; i < wave_.size(); ++i) l1 += M_PI * std::fabs(double(wave_[i]));
  const int r = nonzero_modes();
  const double copies = r > 1 ? std::pow(2.0, r - 1) : 1.0;
  return std::fabs(amplitude_) * (1.0 + l1) * (1.0 + l1) * copies;
}

namespace {

bool all_zero(const Eigen::VectorXi& k) {
  for (Eigen::Index i = 0; i < k.size(); ++i)
    if (k[i] != 0) return false;
  return true;
}

std::string wave_to_string(const Eigen::VectorXi& k) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    if (i) out << ',';
    out << k[i];
  }
  return out.str();
}

}  // namespace

PdeProblem make_poisson(const Eigen::VectorXi& wave, double amplitude) {
  if (all_zero(wave))
    throw std::invalid_argument("make_poisson: k = 0 has no unique zero-mean solution");
  PdeProblem p;
  p.family = ProblemFamily::poisson;
  p.dim = static_cast<int>(wave.size());
  p.exact = std::make_shared<CosineSolution>(wave, amplitude);
  const auto u = p.exact;
  const double lambda = u->laplace_eigenvalue();
  p.f = [u, lambda](const Eigen::VectorXd& x) { return lambda * u->value(x); };
  p.boundary_value = [u](const Eigen::VectorXd& x) { return u->value(x); };
  p.coeff_bound = std::max(1.0, lambda * std::fabs(amplitude));
  p.id = "poisson:d=" + std::to_string(p.dim) + ",k=" + wave_to_string(wave);
  return p;
}

PdeProblem make_schrodinger(const Eigen::VectorXi& wave, double v0, double amplitude) {
  if (!(v0 > 0.0)) throw std::invalid_argument("make_schrodinger: v0 > 0 required");
  PdeProblem p;
  p.family = ProblemFamily::schrodinger;
  p.dim = static_cast<int>(wave.size());
  p.exact = std::make_shared<CosineSolution>(wave, amplitude);
  const auto u = p.exact;
  const double lambda = u->laplace_eigenvalue();
  p.f = [u, lambda, v0](const Eigen::VectorXd& x) { return (lambda + v0) * u->value(x); };
  p.boundary_value = [u](const Eigen::VectorXd& x) { return u->value(x); };
  p.potential = [v0](const Eigen::VectorXd&) { return v0; };
  p.v_min = v0;
  p.v_max = v0;
  p.coeff_bound = std::max({1.0, v0, (lambda + v0) * std::fabs(amplitude)});
  p.id = "schrodinger:d=" + std::to_string(p.dim) + ",k=" + wave_to_string(wave) +
         ",v0=" + std::to_string(v0);
  return p;
}

PdeProblem make_schrodinger_sine(const Eigen::VectorXi& wave, double amplitude) {
  PdeProblem p;
  p.family = ProblemFamily::schrodinger;
  p.dim = static_cast<int>(wave.size());
  p.exact = std::make_shared<CosineSolution>(wave, amplitude);
  const auto u = p.exact;
  const double lambda = u->laplace_eigenvalue();
  auto V = [](const Eigen::VectorXd& x) { return 2.0 + std::sin(M_PI * x[0]); };
  p.f = [u, lambda, V](const Eigen::VectorXd& x) { return (lambda + V(x)) * u->value(x); };
  p.boundary_value = [u](const Eigen::VectorXd& x) { return u->value(x); };
  p.potential = V;
  p.v_min = 1.0;
  p.v_max = 3.0;
  p.coeff_bound = std::max({3.0, (lambda + 3.0) * std::fabs(amplitude)});
  p.id = "schrodinger:d=" + std::to_string(p.dim) + ",k=" + wave_to_string(wave) +
         ",potential=sine";
  return p;
}

PdeProblem make_elliptic(EllipticKind kind, const Eigen::VectorXi& wave, double amplitude) {
  PdeProblem p;
  p.family = ProblemFamily::elliptic_dirichlet;
  p.dim = static_cast<int>(wave.size());
  p.exact = std::make_shared<CosineSolution>(wave, amplitude);
  const auto u = p.exact;
  const int d = p.dim;
  const bool variable = kind == EllipticKind::variable_coeff;
  const double b_const = variable ? 0.5 : 0.0;
  const double c_const = variable ? 1.0 : 0.0;

  p.diffusion = [d, variable](const Eigen::VectorXd& x) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d);
    if (variable) a(0, 0) = 1.0 + 0.5 * std::sin(M_PI * x[0]);
    return a;
  };
  p.drift = [d, b_const](const Eigen::VectorXd&) {
    return Eigen::VectorXd::Constant(d, b_const);
  };
  p.reaction = [c_const](const Eigen::VectorXd&) { return c_const; };
  p.boundary_value = [u](const Eigen::VectorXd& x) { return u->value(x); };

  // f = L u* from the closed-form derivatives of the cosine product; the
  // catalog diffusion is diagonal.
  auto diffusion = p.diffusion;
  p.f = [u, diffusion, b_const, c_const, d](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd a = diffusion(x);
    const Eigen::MatrixXd h = u->hessian(x);
    const Eigen::VectorXd g = u->gradient(x);
    double out = 0.0;
    for (int i = 0; i < d; ++i) out -= a(i, i) * h(i, i);
    for (int i = 0; i < d; ++i) out += b_const * g[i];
    out += c_const * u->value(x);
    return out;
  };
  p.coeff_bound = std::max({1.5, b_const, c_const, 1.0});
  p.id = std::string("elliptic:d=") + std::to_string(d) + ",k=" + wave_to_string(wave) +
         ",coeff=" + (variable ? "variable" : "identity");
  return p;
}

double pde_residual(const PdeProblem& problem, const Field& u, const Eigen::VectorXd& x) {
  switch (problem.family) {
    case ProblemFamily::poisson:
      return -u.hessian(x).trace() - problem.f(x);
    case ProblemFamily::schrodinger:
      return -u.hessian(x).trace() + problem.potential(x) * u.value(x) - problem.f(x);
    case ProblemFamily::elliptic_dirichlet: {
      const Eigen::MatrixXd a = problem.diffusion(x);
      const Eigen::MatrixXd h = u.hessian(x);
      const Eigen::VectorXd b = problem.drift(x);
      double out = -(a.array() * h.array()).sum();
      out += b.dot(u.gradient(x));
      out += problem.reaction(x) * u.value(x);
      return out - problem.f(x);
    }
  }
  throw std::logic_error("pde_residual: unreachable");
}

EllipticCoefficients elliptic_coefficients(const PdeProblem& problem, const Eigen::VectorXd& x) {
  EllipticCoefficients out;
  switch (problem.family) {
    case ProblemFamily::poisson:
      out.a = Eigen::MatrixXd::Identity(problem.dim, problem.dim);
      out.b = Eigen::VectorXd::Zero(problem.dim);
      out.c = 0.0;
      return out;
    case ProblemFamily::schrodinger:
      out.a = Eigen::MatrixXd::Identity(problem.dim, problem.dim);
      out.b = Eigen::VectorXd::Zero(problem.dim);
      out.c = problem.potential(x);
      return out;
    case ProblemFamily::elliptic_dirichlet:
      out.a = problem.diffusion(x);
      out.b = problem.drift(x);
      out.c = problem.reaction(x);
      return out;
  }
  throw std::logic_error("elliptic_coefficients: unreachable");
}

ExactFields exact_fields(const PdeProblem& problem, const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  ExactFields out;
  out.values.resize(n);
  out.gradients.resize(n, problem.dim);
  out.hessians.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd x = points.row(i);
    out.values[i] = problem.exact->value(x);
    out.gradients.row(i) = problem.exact->gradient(x).transpose();
    out.hessians.push_back(problem.exact->hessian(x));
  }
  return out;
}

namespace {

struct ParsedId {
  std::string family;
  std::vector<int> k;
  bool has_d = false;
  int d = 0;
  bool has_v0 = false;
  double v0 = 0.0;
  std::string potential;
  std::string coeff;
  bool has_amplitude = false;
  double amplitude = 1.0;
};

ParsedId parse_id(const std::string& id) {
  ParsedId out;
  const auto colon = id.find(':');
  out.family = id.substr(0, colon);
  if (colon == std::string::npos) return out;

  std::string current_key;
  std::stringstream body(id.substr(colon + 1));
  std::string token;
  while (std::getline(body, token, ',')) {
    if (token.empty()) throw std::invalid_argument("parse_problem: empty token in '" + id + "'");
    const auto eq = token.find('=');
    std::string key, val;
    if (eq == std::string::npos) {
      // Bare token continues the previous list-valued key (the k vector).
      key = current_key;
      val = token;
    } else {
      key = token.substr(0, eq);
      val = token.substr(eq + 1);
    }
    current_key = key;
    try {
      if (key == "d") {
        out.has_d = true;
        out.d = std::stoi(val);
      } else if (key == "k") {
        out.k.push_back(std::stoi(val));
      } else if (key == "v0") {
        out.has_v0 = true;
        out.v0 = std::stod(val);
      } else if (key == "potential") {
        out.potential = val;
      } else if (key == "coeff") {
        out.coeff = val;
      } else if (key == "amplitude") {
        out.has_amplitude = true;
        out.amplitude = std::stod(val);
      } else {
        throw std::invalid_argument("parse_problem: unknown key '" + key + "' in '" + id + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_problem: bad value for '" + key + "' in '" + id + "'");
    }
  }
  return out;
}

}  // namespace

PdeProblem parse_problem(const std::string& id) {
  const ParsedId parsed = parse_id(id);
  if (parsed.k.empty()) throw std::invalid_argument("parse_problem: missing k in '" + id + "'");
  if (parsed.has_d && parsed.d != static_cast<int>(parsed.k.size()))
    throw std::invalid_argument("parse_problem: d disagrees with k length in '" + id + "'");
  Eigen::VectorXi wave(parsed.k.size());
  for (std::size_t i = 0; i < parsed.k.size(); ++i) wave[static_cast<Eigen::Index>(i)] = parsed.k[i];
  const double amp = parsed.amplitude;

  if (parsed.family == "poisson") return make_poisson(wave, amp);
  if (parsed.family == "schrodinger") {
    if (parsed.potential == "sine") return make_schrodinger_sine(wave, amp);
    if (!parsed.potential.empty())
      throw std::invalid_argument("parse_problem: unknown potential '" + parsed.potential + "'");
    return make_schrodinger(wave, parsed.has_v0 ? parsed.v0 : 1.0, amp);
  }
  if (parsed.family == "elliptic") {
    if (parsed.coeff.empty() || parsed.coeff == "identity")
      return make_elliptic(EllipticKind::laplace_like, wave, amp);
    if (parsed.coeff == "variable") return make_elliptic(EllipticKind::variable_coeff, wave, amp);
    throw std::invalid_argument("parse_problem: unknown coeff '" + parsed.coeff + "'");
  }
  throw std::invalid_argument("parse_problem: unknown family '" + parsed.family + "'");
}

}  // namespace ritznet
