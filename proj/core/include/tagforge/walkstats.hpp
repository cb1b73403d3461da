#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tagforge {

// x exp(-x^2 / 2t) / sqrt(2 pi t^3): first passage to 0 of a unit-variance
// walk started at height x.
double first_passage_pdf(double x, double t);
double first_passage_mode(double x);  // x^2 / 3
double numeric_first_passage_mode(double x);

// erf(x / sqrt(2t)) and its large-t form sqrt(2 / (pi t)) x.
double survival_probability(double x, double t);
double survival_asymptote(double x, double t);

// The order-of-magnitude guess 18 n^2 / pi for the longest survivor among the
// 3 * 2^n initial conditions of compressed length n.
double ensemble_survival_estimate(double n);

// Integral of the pdf over (0, t_max), adaptive quadrature.
double first_passage_mass(double x, double t_max);

// First-passage times of seeded +-1 walks from height x; 0 = not absorbed by
// t_max. PRNG: std::mt19937_64.
std::vector<std::uint64_t> monte_carlo_first_passage(std::uint64_t x, std::uint64_t t_max, std::uint64_t samples,
                                                     std::uint64_t seed);

struct BinCheck {
  double lo = 0, hi = 0;
  double expected = 0;  // probability from the continuous law
  double observed = 0;  // Monte-Carlo frequency
  double sigma = 0;     // binomial standard error
  double z = 0;
};

// Compares Monte-Carlo bin frequencies with S(lo) - S(hi).
std::vector<BinCheck> compare_first_passage(std::uint64_t x, const std::vector<double>& edges, std::uint64_t samples,
                                            std::uint64_t seed);

struct SurvivalCheck {
  double expected = 0, observed = 0, sigma = 0, z = 0;
};
SurvivalCheck compare_survival(std::uint64_t x, std::uint64_t t, std::uint64_t samples, std::uint64_t seed);

std::vector<double> detrend(const std::vector<double>& trace, double slope);
template <class T>
std::vector<double> to_doubles(const std::vector<T>& v) {
  return std::vector<double>(v.begin(), v.end());
}

bool is_unit_step_walk(const std::vector<std::uint64_t>& lengths);

enum class FitMethod { least_squares, theil_sen };

// (word length, halting step) pairs; returns the base b of steps ~ b^m.
double winner_growth_fit(const std::vector<std::pair<double, double>>& winners,
                         FitMethod method = FitMethod::least_squares);

struct LineFit {
  double slope = 0, intercept = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 FitMethod method = FitMethod::least_squares);

void write_trace_csv(std::ostream& out, const std::vector<double>& trace, std::uint64_t stride = 1);
std::vector<double> read_trace_csv(std::istream& in);
std::string trace_svg(const std::vector<double>& trace, int width = 800, int height = 300,
                      const std::string& title = "");

}  // namespace tagforge
