#include "tagforge/walkstats.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace tagforge {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

void require_positive(double x, double t) {
  if (!(x > 0) || !(t > 0)) throw std::invalid_argument("first-passage arguments must be positive");
}

}  // namespace

double first_passage_pdf(double x, double t) {
  require_positive(x, t);
  return x * std::exp(-x * x / (2 * t)) / std::sqrt(2 * kPi * t * t * t);
}

double first_passage_mode(double x) {
  if (!(x > 0)) throw std::invalid_argument("height must be positive");
  return x * x / 3;
}

double numeric_first_passage_mode(double x) {
  if (!(x > 0)) throw std::invalid_argument("height must be positive");
  auto neg = [x](double t) { return -first_passage_pdf(x, t); };
  return boost::math::tools::brent_find_minima(neg, 1e-6 * x * x, 10 * x * x, 40).first;
}

double survival_probability(double x, double t) {
  require_positive(x, t);
  return std::erf(x / std::sqrt(2 * t));
}

double survival_asymptote(double x, double t) {
  require_positive(x, t);
  return std::sqrt(2 / (kPi * t)) * x;
}

double ensemble_survival_estimate(double n) { return 18 * n * n / kPi; }

double first_passage_mass(double x, double t_max) {
  require_positive(x, t_max);
  // Integrate over s = log t; the density is negligible below t = x^2 / 400.
  const double lo = std::log(x * x / 400);
  const double hi = std::log(t_max);
  if (hi <= lo) return 0.0;
  auto f = [x](double s) {
    const double t = std::exp(s);
    return first_passage_pdf(x, t) * t;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-12);
}

std::vector<std::uint64_t> monte_carlo_first_passage(std::uint64_t x, std::uint64_t t_max, std::uint64_t samples,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> out(samples, 0);
  for (auto& hit : out) {
    std::int64_t h = static_cast<std::int64_t>(x);
    std::uint64_t t = 0;
    std::uint64_t bits = 0;
    int avail = 0;
    while (h > 0 && t < t_max) {
      if (avail == 0) {
        bits = rng();
        avail = 64;
      }
      h += (bits & 1u) ? 1 : -1;
      bits >>= 1;
      --avail;
      ++t;
    }
    if (h <= 0) hit = t;
  }
  return out;
}

std::vector<BinCheck> compare_first_passage(std::uint64_t x, const std::vector<double>& edges, std::uint64_t samples,
                                            std::uint64_t seed) {
  if (edges.size() < 2) throw std::invalid_argument("need at least one bin");
  const auto t_max = static_cast<std::uint64_t>(std::ceil(edges.back()));
  const auto times = monte_carlo_first_passage(x, t_max, samples, seed);
  std::vector<BinCheck> out;
  const double xd = static_cast<double>(x);
  auto survival = [xd](double t) { return t > 0 ? survival_probability(xd, t) : 1.0; };
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    BinCheck b;
    b.lo = edges[i];
    b.hi = edges[i + 1];
    b.expected = survival(b.lo) - survival(b.hi);
    std::uint64_t count = 0;
    for (auto t : times)
      if (t > 0 && static_cast<double>(t) > b.lo && static_cast<double>(t) <= b.hi) ++count;
    b.observed = static_cast<double>(count) / static_cast<double>(samples);
    b.sigma = std::sqrt(b.expected * (1 - b.expected) / static_cast<double>(samples));
    b.z = b.sigma > 0 ? (b.observed - b.expected) / b.sigma : 0.0;
    out.push_back(b);
  }
  return out;
}

SurvivalCheck compare_survival(std::uint64_t x, std::uint64_t t, std::uint64_t samples, std::uint64_t seed) {
  const auto times = monte_carlo_first_passage(x, t, samples, seed);
  SurvivalCheck c;
  c.expected = survival_probability(static_cast<double>(x), static_cast<double>(t));
  const auto alive = std::count(times.begin(), times.end(), std::uint64_t{0});
  c.observed = static_cast<double>(alive) / static_cast<double>(samples);
  c.sigma = std::sqrt(c.expected * (1 - c.expected) / static_cast<double>(samples));
  c.z = (c.observed - c.expected) / c.sigma;
  return c;
}

std::vector<double> detrend(const std::vector<double>& trace, double slope) {
  std::vector<double> out(trace.size());
  for (std::size_t t = 0; t < trace.size(); ++t) out[t] = trace[t] - slope * static_cast<double>(t);
  return out;
}

bool is_unit_step_walk(const std::vector<std::uint64_t>& lengths) {
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    const auto d = static_cast<std::int64_t>(lengths[i]) - static_cast<std::int64_t>(lengths[i - 1]);
    if (d != 1 && d != -1) return false;
  }
  return true;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, FitMethod method) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs at least two points");
  LineFit f;
  if (method == FitMethod::least_squares) {
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) throw std::invalid_argument("degenerate fit: all x equal");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
  }
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
  if (slopes.empty()) throw std::invalid_argument("degenerate fit: all x equal");
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  f.slope = median(slopes);
  std::vector<double> resid(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) resid[i] = y[i] - f.slope * x[i];
  f.intercept = median(resid);
  return f;
}

double winner_growth_fit(const std::vector<std::pair<double, double>>& winners, FitMethod method) {
  if (winners.size() < 4) throw std::invalid_argument("growth fit needs at least four winners");
  std::vector<double> x, y;
  for (const auto& [m, steps] : winners) {
    if (!(steps > 0)) throw std::invalid_argument("halting steps must be positive");
    x.push_back(m);
    y.push_back(std::log(steps));
  }
  return std::exp(fit_line(x, y, method).slope);
}

void write_trace_csv(std::ostream& out, const std::vector<double>& trace, std::uint64_t stride) {
  out << "# tagforge-trace v1\n";
  out << "step,value\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << i * stride << ',' << trace[i] << '\n';
}

std::vector<double> read_trace_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("step", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("trace row needs step,value");
    out.push_back(std::stod(line.substr(comma + 1)));
  }
  return out;
}

std::string trace_svg(const std::vector<double>& trace, int width, int height, const std::string& title) {
  const int margin = 40;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  if (!title.empty()) svg << "  <title>" << title << "</title>\n";
  const int x0 = margin, y0 = height - margin, x1 = width - 10, y1 = 10;
  svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  if (!trace.empty()) {
    const auto [lo_it, hi_it] = std::minmax_element(trace.begin(), trace.end());
    const double lo = *lo_it, hi = *hi_it > *lo_it ? *hi_it : *lo_it + 1;
    const double n = trace.size() > 1 ? static_cast<double>(trace.size() - 1) : 1.0;
    svg << "  <text x=\"2\" y=\"" << y1 + 10 << "\" font-size=\"10\">" << hi << "</text>\n";
    svg << "  <text x=\"2\" y=\"" << y0 << "\" font-size=\"10\">" << lo << "</text>\n";
    svg << "  <text x=\"" << x1 - 60 << "\" y=\"" << height - 10 << "\" font-size=\"10\">" << trace.size() - 1
        << "</text>\n";
    svg << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    // Downsample to at most two points per pixel column.
    const std::size_t cols = static_cast<std::size_t>(x1 - x0);
    const std::size_t step = std::max<std::size_t>(1, trace.size() / (2 * cols));
    for (std::size_t i = 0; i < trace.size(); i += step) {
      const double px = x0 + (x1 - x0) * (static_cast<double>(i) / n);
      const double py = y0 - (y0 - y1) * ((trace[i] - lo) / (hi - lo));
      svg << px << ',' << py << ' ';
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace tagforge
