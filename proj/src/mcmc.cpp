#include "rdpg/mcmc.hpp"

#include "kernels.hpp"
#include "rdpg/model.hpp"
#include "rdpg/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace rdpg {
namespace {

constexpr int kCheckpointVersion = 1;
constexpr double kAdaptExponent = 0.6;
// Default starting points are kept this far inside X so that every p_ij is
// strictly inside (0, 1).
constexpr double kInteriorMargin = 1e-3;

bool inside_support(const double* x, Eigen::Index d) {
  double sq = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    if (!(x[c] >= 0.0)) return false;
    sq += x[c] * x[c];
  }
  return sq <= 1.0;
}

double squared_norm(const double* x, Eigen::Index d) {
  double sq = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) sq += x[c] * x[c];
  return sq;
}

Matrix interior_start(const Matrix& projected) {
  Matrix X = projected.cwiseMax(kInteriorMargin);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double norm = X.row(i).norm();
    if (norm > 1.0 - kInteriorMargin) X.row(i) *= (1.0 - kInteriorMargin) / norm;
  }
  return X;
}

std::uint64_t fingerprint(const AdjacencyMatrix& Y) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(Y.n()));
  mix(Y.includes_self_loops() ? 1 : 0);
  const Matrix& A = Y.values();
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i) mix(A(i, j) != 0.0 ? 0x9e3779b97f4a7c15ull ^ (i * 31 + j) : i + j);
  return h;
}

// Doubles are written as hex floats and parsed with strtod, which round-trips
// exactly.
std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void expect(const std::string& word) {
    const std::string got = token();
    if (got != word) throw std::runtime_error("checkpoint: expected '" + word + "', found '" + got + "'");
  }
  std::string token() {
    std::string t;
    if (!(in_ >> t)) throw std::runtime_error("checkpoint: unexpected end of input");
    return t;
  }
  double real() {
    const std::string t = token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw std::runtime_error("checkpoint: bad number '" + t + "'");
    return v;
  }
  long long integer() { return std::stoll(token()); }
  std::string line() {
    std::string l;
    std::getline(in_ >> std::ws, l);
    return l;
  }

 private:
  std::istream& in_;
};

}  // namespace

int ChainConfig::retained_count() const {
  if (iterations <= burn_in || thin < 1) return 0;
  return (iterations - burn_in) / thin;
}

void ChainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("chain needs at least one iteration");
  if (burn_in < 0) throw std::invalid_argument("burn-in must be nonnegative");
  if (thin < 1) throw std::invalid_argument("thinning interval must be >= 1");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) throw std::invalid_argument("step size must be positive");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
    throw std::invalid_argument("target acceptance must lie in (0, 1)");
  if (retained_count() == 0) throw std::invalid_argument("no retained samples");
}

MetropolisChain::MetropolisChain(const AdjacencyMatrix& Y, Eigen::Index d, PriorSpec prior, ChainConfig config,
                                 std::optional<LatentMatrix> init)
    : Y_(&Y), prior_(prior), config_(config), rng_(config.seed) {
  config_.validate();
  prior_.validate();
  const auto n = Y.n();
  if (d < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  if (d > n) throw std::invalid_argument("embedding dimension exceeds vertex count");

  if (init) {
    if (init->n() != n || init->d() != d) throw std::invalid_argument("initial state has the wrong shape");
    X_ = init->values();
  } else {
    const LatentMatrix ase = adjacency_spectral_embedding(Y, d);
    X_ = config_.target == Target::pse ? interior_start(project_to_latent_space(ase).values()) : ase.values();
  }
  log_target_ = full_log_target();
  if (!std::isfinite(log_target_)) throw std::invalid_argument("initial state has zero posterior density");

  log_step_ = std::log(config_.step_size);
  vertex_accepted_.assign(static_cast<std::size_t>(n), 0);
  step_trace_.reserve(static_cast<std::size_t>(config_.iterations));
  sum_P_ = Matrix::Zero(n, n);
}

double MetropolisChain::step_size() const { return std::exp(log_step_); }

double MetropolisChain::full_log_target() const {
  const bool restricted = config_.target == Target::pse || prior_.kind == PriorSpec::Kind::uniform_on_X;
  for (Eigen::Index i = 0; i < X_.rows(); ++i) {
    const Vector row = X_.row(i).transpose();
    if (restricted && !inside_support(row.data(), row.size())) return kLogZero;
  }
  const bool constrained = config_.target == Target::pse;
  const LatentMatrix X(X_, constrained);
  const double prior = log_prior(X, prior_);
  if (is_log_zero(prior)) return kLogZero;
  const double lik = constrained ? bernoulli_loglik(X, *Y_) : gaussian_pseudo_loglik(X, *Y_);
  return lik + prior;
}

double MetropolisChain::propose_delta(Eigen::Index i, const double* x_old, const double* x_new) const {
  const auto n = X_.rows();
  const auto d = X_.cols();
  const bool pse = config_.target == Target::pse;
  double prior_delta = 0.0;
  if (pse || prior_.kind == PriorSpec::Kind::uniform_on_X) {
    if (!inside_support(x_new, d)) return kLogZero;
  }
  if (prior_.kind == PriorSpec::Kind::gaussian) {
    prior_delta = -(squared_norm(x_new, d) - squared_norm(x_old, d)) / (2.0 * prior_.sigma * prior_.sigma);
  }
  const double* y = Y_->values().col(i).data();
  const double lik_delta =
      pse ? detail::bernoulli_row_delta(X_.data(), n, d, y, i, x_old, x_new, Y_->includes_self_loops())
          : detail::gaussian_row_delta(X_.data(), n, d, y, i, x_old, x_new, Y_->includes_self_loops());
  if (is_log_zero(lik_delta)) return kLogZero;
  return lik_delta + prior_delta;
}

void MetropolisChain::sweep() {
  if (finished()) return;
  const auto n = X_.rows();
  const auto d = X_.cols();
  const double step = std::exp(log_step_);
  const bool post_burn_in = iteration_ >= config_.burn_in;

  std::vector<double> x_old(static_cast<std::size_t>(d)), x_new(static_cast<std::size_t>(d));
  int sweep_accepted = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) {
      x_old[c] = X_(i, c);
      x_new[c] = x_old[c] + step * normal_(rng_);
    }
    // Drawn for every proposal, including ones rejected without evaluation.
    const double u = uniform_(rng_);
    const double delta = propose_delta(i, x_old.data(), x_new.data());
    if (!is_log_zero(delta) && std::log(u) < delta) {
      for (Eigen::Index c = 0; c < d; ++c) X_(i, c) = x_new[c];
      log_target_ += delta;
      ++sweep_accepted;
      if (post_burn_in) ++vertex_accepted_[i];
    }
  }
  if (post_burn_in) {
    accepted_ += sweep_accepted;
    proposed_ += n;
  }
  step_trace_.push_back(step);
  ++iteration_;

  if (config_.adapt && iteration_ <= config_.burn_in) {
    const double rate = static_cast<double>(sweep_accepted) / static_cast<double>(n);
    log_step_ += (rate - config_.target_acceptance) / std::pow(static_cast<double>(iteration_), kAdaptExponent);
  }
  if (iteration_ > config_.burn_in && (iteration_ - config_.burn_in) % config_.thin == 0) retain();
}

void MetropolisChain::retain() {
  sum_P_.selfadjointView<Eigen::Lower>().rankUpdate(X_);
  ++samples_;
  if (config_.max_retained < 0 || static_cast<int>(retained_.size()) < config_.max_retained) {
    retained_.push_back(X_);
    retained_log_target_.push_back(log_target_);
  }
}

void MetropolisChain::run() {
  while (!finished()) sweep();
}

PosteriorSummary MetropolisChain::summary() const {
  if (samples_ == 0) throw std::logic_error("chain has not produced any retained samples yet");
  PosteriorSummary out;
  const auto n = X_.rows();
  out.mean_P = Matrix(sum_P_.selfadjointView<Eigen::Lower>()) / static_cast<double>(samples_);
  out.samples = samples_;
  const bool constrained = config_.target == Target::pse;
  out.retained.reserve(retained_.size());
  for (const auto& sample : retained_) out.retained.emplace_back(sample, constrained);
  out.retained_log_target = retained_log_target_;
  out.acceptance_rate = proposed_ > 0 ? static_cast<double>(accepted_) / static_cast<double>(proposed_) : 0.0;
  out.per_vertex_acceptance.resize(n);
  const double per_vertex_proposals = static_cast<double>(proposed_) / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.per_vertex_acceptance(i) = proposed_ > 0 ? vertex_accepted_[i] / per_vertex_proposals : 0.0;
  out.step_size_trace = step_trace_;
  out.final_state = LatentMatrix(X_, constrained);
  return out;
}

void MetropolisChain::save_checkpoint(std::ostream& out) const {
  const auto n = X_.rows();
  const auto d = X_.cols();
  out << "rdpg-chain-checkpoint " << kCheckpointVersion << '\n';
  out << "config " << config_.iterations << ' ' << config_.burn_in << ' ' << config_.thin << ' '
      << hex(config_.step_size) << ' ' << config_.seed << ' ' << (config_.adapt ? 1 : 0) << ' '
      << hex(config_.target_acceptance) << ' ' << (config_.target == Target::pse ? "pse" : "gse") << ' '
      << config_.max_retained << '\n';
  out << "prior " << (prior_.kind == PriorSpec::Kind::gaussian ? "gaussian" : "uniform") << ' '
      << hex(prior_.sigma) << '\n';
  out << "graph " << n << ' ' << d << ' ' << fingerprint(*Y_) << '\n';
  out << "progress " << iteration_ << ' ' << hex(log_step_) << ' ' << hex(log_target_) << ' ' << accepted_ << ' '
      << proposed_ << ' ' << samples_ << '\n';
  out << "vertex_accepted";
  for (auto v : vertex_accepted_) out << ' ' << v;
  out << "\nstep_trace " << step_trace_.size();
  for (double v : step_trace_) out << ' ' << hex(v);
  out << "\nstate";
  for (Eigen::Index k = 0; k < X_.size(); ++k) out << ' ' << hex(X_.data()[k]);
  out << "\nsum_P";
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) out << ' ' << hex(sum_P_(i, j));
  out << "\nretained " << retained_.size() << '\n';
  for (std::size_t s = 0; s < retained_.size(); ++s) {
    out << hex(retained_log_target_[s]);
    for (Eigen::Index k = 0; k < retained_[s].size(); ++k) out << ' ' << hex(retained_[s].data()[k]);
    out << '\n';
  }
  out << "rng " << rng_ << '\n';
  out << "normal " << normal_ << '\n';
  out << "end\n";
}

MetropolisChain MetropolisChain::load_checkpoint(std::istream& in, const AdjacencyMatrix& Y) {
  Reader r(in);
  r.expect("rdpg-chain-checkpoint");
  if (r.integer() != kCheckpointVersion) throw std::runtime_error("checkpoint: unsupported version");

  MetropolisChain chain;
  chain.Y_ = &Y;
  r.expect("config");
  ChainConfig& cfg = chain.config_;
  cfg.iterations = static_cast<int>(r.integer());
  cfg.burn_in = static_cast<int>(r.integer());
  cfg.thin = static_cast<int>(r.integer());
  cfg.step_size = r.real();
  cfg.seed = std::stoull(r.token());
  cfg.adapt = r.integer() != 0;
  cfg.target_acceptance = r.real();
  const std::string target = r.token();
  if (target != "pse" && target != "gse") throw std::runtime_error("checkpoint: unknown target " + target);
  cfg.target = target == "pse" ? Target::pse : Target::gse;
  cfg.max_retained = static_cast<int>(r.integer());
  cfg.validate();

  r.expect("prior");
  const std::string kind = r.token();
  chain.prior_.kind = kind == "gaussian" ? PriorSpec::Kind::gaussian : PriorSpec::Kind::uniform_on_X;
  chain.prior_.sigma = r.real();
  chain.prior_.validate();

  r.expect("graph");
  const auto n = static_cast<Eigen::Index>(r.integer());
  const auto d = static_cast<Eigen::Index>(r.integer());
  if (n != Y.n()) throw std::runtime_error("checkpoint: graph size mismatch");
  if (std::stoull(r.token()) != fingerprint(Y)) throw std::runtime_error("checkpoint: graph fingerprint mismatch");

  r.expect("progress");
  chain.iteration_ = static_cast<int>(r.integer());
  chain.log_step_ = r.real();
  chain.log_target_ = r.real();
  chain.accepted_ = r.integer();
  chain.proposed_ = r.integer();
  chain.samples_ = static_cast<int>(r.integer());

  r.expect("vertex_accepted");
  chain.vertex_accepted_.resize(static_cast<std::size_t>(n));
  for (auto& v : chain.vertex_accepted_) v = r.integer();
  r.expect("step_trace");
  chain.step_trace_.resize(static_cast<std::size_t>(r.integer()));
  for (auto& v : chain.step_trace_) v = r.real();

  r.expect("state");
  chain.X_.resize(n, d);
  for (Eigen::Index k = 0; k < chain.X_.size(); ++k) chain.X_.data()[k] = r.real();
  r.expect("sum_P");
  chain.sum_P_ = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) chain.sum_P_(i, j) = r.real();

  r.expect("retained");
  const auto kept = static_cast<std::size_t>(r.integer());
  chain.retained_.resize(kept);
  chain.retained_log_target_.resize(kept);
  for (std::size_t s = 0; s < kept; ++s) {
    chain.retained_log_target_[s] = r.real();
    chain.retained_[s].resize(n, d);
    for (Eigen::Index k = 0; k < chain.retained_[s].size(); ++k) chain.retained_[s].data()[k] = r.real();
  }

  r.expect("rng");
  std::istringstream rng_text(r.line());
  if (!(rng_text >> chain.rng_)) throw std::runtime_error("checkpoint: bad RNG state");
  r.expect("normal");
  std::istringstream normal_text(r.line());
  if (!(normal_text >> chain.normal_)) throw std::runtime_error("checkpoint: bad normal distribution state");
  r.expect("end");
  return chain;
}

PosteriorSummary run_chain(const AdjacencyMatrix& Y, Eigen::Index d, const PriorSpec& prior,
                           const ChainConfig& config, std::optional<LatentMatrix> init) {
  MetropolisChain chain(Y, d, prior, config, std::move(init));
  chain.run();
  return chain.summary();
}

PosteriorSummary run_gse_chain(const AdjacencyMatrix& Y, Eigen::Index d, double sigma, ChainConfig config) {
  if (!(sigma > 0.0)) throw std::invalid_argument("Gaussian prior needs sigma > 0");
  config.target = Target::gse;
  return run_chain(Y, d, PriorSpec::gaussian(sigma), config);
}

LatentMatrix point_estimator(const PosteriorSummary& summary, Eigen::Index d) {
  if (d < 1 || d > summary.mean_P.rows())
    throw std::invalid_argument("embedding dimension exceeds posterior mean size");
  return low_rank_factor(summary.mean_P, d);
}

}  // namespace rdpg
