#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <filesystem>
#include <random>
#include <map>
#include <string>

#include <unistd.h>

#include "heartcbr/case.hpp"
#include "heartcbr/dataset.hpp"
#include "heartcbr/mlp.hpp"
#include "heartcbr/normalization.hpp"

namespace testing {

inline heartcbr::Case sample_case() {
  heartcbr::Case c;
  c.age = 54;
  c.sex = 1;
  c.cp = 0;
  c.trestbps = 130;
  c.chol = 250;
  c.fbs = 0;
  c.restecg = 1;
  c.thalach = 150;
  c.exang = 0;
  c.oldpeak = 1.0;
  c.slope = 1;
  c.ca = 0;
  c.thal = 2;
  c.target = 1;
  return c;
}

inline std::map<std::string, std::string> sample_fields() {
  return {{"age", "54"},    {"sex", "1"},     {"cp", "0"},      {"trestbps", "130"}, {"chol", "250"},
          {"fbs", "0"},     {"restecg", "1"}, {"thalach", "150"}, {"exang", "0"},    {"oldpeak", "1.0"},
          {"slope", "1"},   {"ca", "0"},      {"thal", "2"},    {"target", "1"}};
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(gen);
}

// Any record inside the documented domains.
inline heartcbr::Case random_case(std::mt19937_64& gen) {
  heartcbr::Case c;
  c.age = uniform_int(gen, 29, 77);
  c.sex = uniform_int(gen, 0, 1);
  c.cp = uniform_int(gen, 0, 3);
  c.trestbps = uniform_int(gen, 94, 200);
  c.chol = uniform_int(gen, 126, 564);
  c.fbs = uniform_int(gen, 0, 1);
  c.restecg = uniform_int(gen, 0, 2);
  c.thalach = uniform_int(gen, 71, 202);
  c.exang = uniform_int(gen, 0, 1);
  c.oldpeak = uniform_int(gen, 0, 62) / 10.0;
  c.slope = uniform_int(gen, 0, 2);
  c.ca = uniform_int(gen, 0, 3);
  c.thal = uniform_int(gen, 1, 3);
  c.target = uniform_int(gen, 0, 1);
  return c;
}

// A small base over a random subset of attributes (the others weigh 0) and a
// query inside the base's extrema, so no local similarity is clamped.
struct ToyInstance {
  heartcbr::CaseBase base;
  Eigen::VectorXd weights;
  heartcbr::Case query;
};

inline ToyInstance random_toy(std::mt19937_64& gen) {
  using heartcbr::kFeatureCount;
  ToyInstance t;
  const int n = uniform_int(gen, 1, 20);
  const int active = uniform_int(gen, 1, kFeatureCount);
  std::vector<int> attrs(kFeatureCount);
  std::iota(attrs.begin(), attrs.end(), 0);
  std::shuffle(attrs.begin(), attrs.end(), gen);
  t.weights = Eigen::VectorXd::Zero(kFeatureCount);
  for (int k = 0; k < active; ++k) t.weights(attrs[static_cast<std::size_t>(k)]) = uniform_int(gen, 1, 4);
  // A handful of prototypes keeps exact ties common.
  std::vector<heartcbr::Case> pool;
  for (int k = 0; k < 4; ++k) pool.push_back(random_case(gen));
  for (int k = 0; k < n; ++k) {
    auto c = pool[static_cast<std::size_t>(uniform_int(gen, 0, 3))];
    if (uniform_int(gen, 0, 1)) c.chol += uniform_int(gen, -3, 3);
    if (uniform_int(gen, 0, 1)) c.age += uniform_int(gen, -2, 2);
    if (uniform_int(gen, 0, 2) == 0) c.oldpeak = uniform_int(gen, 0, 40) / 10.0;
    c.target = uniform_int(gen, 0, 1);
    t.base.add(c);
  }
  const auto p = heartcbr::fit_minmax(t.base);
  const auto lo = [&](heartcbr::Attribute a) { return p.min(static_cast<int>(a)); };
  const auto hi = [&](heartcbr::Attribute a) { return p.max(static_cast<int>(a)); };
  t.query = t.base[static_cast<std::size_t>(uniform_int(gen, 0, n - 1))].value;
  t.query.target.reset();
  using A = heartcbr::Attribute;
  t.query.age = uniform_int(gen, static_cast<int>(lo(A::Age)), static_cast<int>(hi(A::Age)));
  t.query.chol = uniform_int(gen, static_cast<int>(lo(A::Cholesterol)), static_cast<int>(hi(A::Cholesterol)));
  t.query.thalach =
      uniform_int(gen, static_cast<int>(lo(A::MaxHeartRate)), static_cast<int>(hi(A::MaxHeartRate)));
  t.query.oldpeak = lo(A::StDepression) + (hi(A::StDepression) - lo(A::StDepression)) * uniform_int(gen, 0, 4) / 4.0;
  return t;
}

struct OracleAnswer {
  heartcbr::CaseId id;
  int target;
  double distance;  // weighted mean of range-scaled absolute differences
  bool ambiguous;   // two distances too close to order reliably
};

// Weighted L1 over raw values, each difference divided by the attribute's
// extent in the base; the smallest distance wins and equal distances go to
// the lowest id.
inline OracleAnswer oracle_nearest(const ToyInstance& t) {
  using heartcbr::kFeatureCount;
  std::vector<double> lo(kFeatureCount, 1e300);
  std::vector<double> hi(kFeatureCount, -1e300);
  for (const auto& e : t.base.entries()) {
    for (int i = 0; i < kFeatureCount; ++i) {
      const double v = heartcbr::attribute_value(e.value, static_cast<heartcbr::Attribute>(i));
      lo[static_cast<std::size_t>(i)] = std::min(lo[static_cast<std::size_t>(i)], v);
      hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], v);
    }
  }
  double wsum = 0;
  for (int i = 0; i < kFeatureCount; ++i) wsum += t.weights(i);
  std::vector<double> dist;
  for (const auto& e : t.base.entries()) {
    long double d = 0;
    for (int i = 0; i < kFeatureCount; ++i) {
      const auto a = static_cast<heartcbr::Attribute>(i);
      const double extent = hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];
      const double diff = std::abs(heartcbr::attribute_value(t.query, a) - heartcbr::attribute_value(e.value, a));
      if (extent == 0) {
        d += diff == 0 ? 0.0L : static_cast<long double>(t.weights(i));
      } else {
        d += static_cast<long double>(t.weights(i)) * diff / extent;
      }
    }
    dist.push_back(static_cast<double>(d / wsum));
  }
  OracleAnswer best{0, 0, 1e300, false};
  for (std::size_t j = 0; j < dist.size(); ++j) {
    if (dist[j] < best.distance - 1e-12) {
      best = {t.base[j].id, *t.base[j].value.target, dist[j], false};
    }
  }
  for (std::size_t j = 0; j < dist.size(); ++j) {
    const double gap = std::abs(dist[j] - best.distance);
    if (gap > 1e-12 && gap < 1e-9) best.ambiguous = true;
  }
  return best;
}

struct GradientCheck {
  int weights = 0;
  int failures = 0;
  double worst_relative = 0.0;
};

// Compares the delta-rule increment (divided by the learning rate) with a
// central difference of -0.5 * sum (t - o)^2, step 1e-6. The difference is
// taken in long double so its rounding noise sits well below the tolerance;
// pairs that are both under 1e-13 count as zero gradients.
inline GradientCheck gradient_check(const heartcbr::nn::Mlp& model, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& t, double rel_tol = 1e-5) {
  namespace nn = heartcbr::nn;
  using Wide = nn::BasicMlp<long double>;
  using WideMatrix = Wide::Matrix;
  const long double h = 1e-6L;
  const auto acts = model.forward(x);
  const auto deltas = nn::backprop_deltas(model, acts, t);
  const auto stepped = nn::update_weights(model, deltas, x, acts);
  const Eigen::MatrixXd dh = (stepped.hidden_weights() - model.hidden_weights()) / model.learning_rate();
  const Eigen::MatrixXd dout = (stepped.output_weights() - model.output_weights()) / model.learning_rate();

  const WideMatrix hw = model.hidden_weights().cast<long double>();
  const WideMatrix ow = model.output_weights().cast<long double>();
  const Wide::Vector xw = x.cast<long double>();
  const Wide::Vector tw = t.cast<long double>();
  auto error_at = [&](const WideMatrix& hidden, const WideMatrix& output) {
    return nn::half_squared_error(Wide(hidden, output, 0.0L).forward(xw).output, tw);
  };

  GradientCheck out;
  auto check = [&](double analytic, long double numeric_wide) {
    ++out.weights;
    const double numeric = static_cast<double>(numeric_wide);
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    if (scale < 1e-13) return;
    const double rel = std::abs(analytic - numeric) / scale;
    out.worst_relative = std::max(out.worst_relative, rel);
    if (rel > rel_tol) ++out.failures;
  };
  for (Eigen::Index i = 0; i < hw.rows(); ++i) {
    for (Eigen::Index j = 0; j < hw.cols(); ++j) {
      WideMatrix plus = hw;
      WideMatrix minus = hw;
      plus(i, j) += h;
      minus(i, j) -= h;
      check(dh(i, j), -(error_at(plus, ow) - error_at(minus, ow)) / (2 * h));
    }
  }
  for (Eigen::Index i = 0; i < ow.rows(); ++i) {
    for (Eigen::Index j = 0; j < ow.cols(); ++j) {
      WideMatrix plus = ow;
      WideMatrix minus = ow;
      plus(i, j) += h;
      minus(i, j) -= h;
      check(dout(i, j), -(error_at(hw, plus) - error_at(hw, minus)) / (2 * h));
    }
  }
  return out;
}

// Network with weights uniform in [-1, 1].
inline heartcbr::nn::Mlp random_network(std::mt19937_64& gen, int inputs, int hidden, int outputs) {
  Eigen::MatrixXd hw(hidden, inputs + 1);
  Eigen::MatrixXd ow(outputs, hidden + 1);
  for (Eigen::Index k = 0; k < hw.size(); ++k) hw.data()[k] = uniform(gen, -1, 1);
  for (Eigen::Index k = 0; k < ow.size(); ++k) ow.data()[k] = uniform(gen, -1, 1);
  return heartcbr::nn::Mlp(hw, ow, 0.5);
}

inline std::filesystem::path fixture_path() { return HEARTCBR_FIXTURE; }

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("heartcbr_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
