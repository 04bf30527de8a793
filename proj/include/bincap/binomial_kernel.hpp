#pragma once

#include <memory>
#include <span>
#include <vector>

namespace bincap {

// Largest trial count the solver accepts.
inline constexpr int kMaxTrials = 4096;

class ChannelSpec {
 public:
  explicit ChannelSpec(int n);

  int trials() const noexcept { return n_; }
  int output_size() const noexcept { return n_ + 1; }

  // log C(n, y)
  double log_choose(int y) const { return (*log_choose_)[static_cast<std::size_t>(y)]; }

 private:
  int n_;
  std::shared_ptr<const std::vector<double>> log_choose_;
};

class OutputPmf {
 public:
  OutputPmf(int n, std::vector<double> probs);

  int trials() const noexcept { return n_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t y) const { return probs_[y]; }
  const std::vector<double>& probs() const noexcept { return probs_; }

 private:
  int n_;
  std::vector<double> probs_;
};

// x log y with the 0 log y = 0 convention.
double xlogy(double x, double y);

double log_pmf(const ChannelSpec& spec, int y, double x);

// Writes log P(y|x) for y = 0..n into out (size n+1).
void log_pmf_row(const ChannelSpec& spec, double x, std::span<double> out);

OutputPmf pmf_row(const ChannelSpec& spec, double x);

double binary_entropy(double x);
double binomial_entropy_exact(const ChannelSpec& spec, double x);
double binomial_entropy_upper(const ChannelSpec& spec, double x);
double binomial_entropy_lower(const ChannelSpec& spec, double x);

}  // namespace bincap
