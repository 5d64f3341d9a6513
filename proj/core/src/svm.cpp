#include "shapfoil/svm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <list>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "shapfoil/dataset.hpp"
#include "shapfoil/strings.hpp"

namespace shapfoil {

double kernel_eval(const KernelSpec& k, std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size())
    throw SvmError("kernel_eval: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                   std::to_string(z.size()) + ")");
  return std::visit(
      [&](const auto& kk) -> double {
        using T = std::decay_t<decltype(kk)>;
        if constexpr (std::is_same_v<T, LinearKernel>) {
          double dot = 0;
          for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
          return dot;
        } else if constexpr (std::is_same_v<T, PolynomialKernel>) {
          double dot = 0;
          for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
          return std::pow(kk.gamma * dot + kk.coef0, kk.degree);
        } else {
          double d2 = 0;
          for (std::size_t i = 0; i < x.size(); ++i) {
            double diff = x[i] - z[i];
            d2 += diff * diff;
          }
          return std::exp(-kk.gamma * d2);
        }
      },
      k);
}

std::string kernel_to_string(const KernelSpec& k) {
  std::ostringstream out;
  std::visit(
      [&](const auto& kk) {
        using T = std::decay_t<decltype(kk)>;
        if constexpr (std::is_same_v<T, LinearKernel>) {
          out << "linear";
        } else if constexpr (std::is_same_v<T, PolynomialKernel>) {
          out << "poly " << kk.degree << ' ' << format_double_roundtrip(kk.gamma) << ' '
              << format_double_roundtrip(kk.coef0);
        } else {
          out << "rbf " << format_double_roundtrip(kk.gamma);
        }
      },
      k);
  return out.str();
}

KernelSpec kernel_from_string(const std::string& s) {
  std::istringstream in(s);
  std::string name;
  in >> name;
  if (name == "linear") return LinearKernel{};
  if (name == "rbf") {
    RbfKernel k;
    in >> k.gamma;
    if (k.gamma <= 0) throw SvmError("rbf kernel: gamma must be > 0");
    return k;
  }
  if (name == "poly" || name == "polynomial") {
    PolynomialKernel k;
    if (!(in >> k.degree)) return k;
    in >> k.gamma >> k.coef0;
    if (k.degree < 1) throw SvmError("poly kernel: degree must be >= 1");
    if (k.gamma <= 0) throw SvmError("poly kernel: gamma must be > 0");
    return k;
  }
  throw SvmError("unknown kernel '" + name + "'");
}

namespace {

constexpr double kSvCutoff = 1e-8;

/// Full kernel matrix for small problems, LRU rows above the cap.
class KernelCache {
public:
  KernelCache(const KernelSpec& k, const std::vector<std::vector<double>>& X,
              std::size_t max_rows = 256)
      : kernel_(k), X_(X), max_rows_(max_rows), full_(X.size() <= max_rows) {
    if (full_) {
      const std::size_t m = X_.size();
      dense_.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        dense_[i].resize(m);
        for (std::size_t j = 0; j <= i; ++j)
          dense_[i][j] = kernel_eval(kernel_, X_[i], X_[j]);
      }
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) dense_[i][j] = dense_[j][i];
    }
  }

  const std::vector<double>& row(std::size_t i) {
    if (full_) return dense_[i];
    auto it = lru_index_.find(i);
    if (it != lru_index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    std::vector<double> r(X_.size());
    for (std::size_t j = 0; j < X_.size(); ++j) r[j] = kernel_eval(kernel_, X_[i], X_[j]);
    lru_.emplace_front(i, std::move(r));
    lru_index_[i] = lru_.begin();
    if (lru_.size() > max_rows_) {
      lru_index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    return lru_.front().second;
  }

private:
  KernelSpec kernel_;
  const std::vector<std::vector<double>>& X_;
  std::size_t max_rows_;
  bool full_;
  std::vector<std::vector<double>> dense_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, decltype(lru_.begin())> lru_index_;
};

class SmoSolver {
public:
  SmoSolver(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
            const Hyperparams& h)
      : X_(X), y_(y), h_(h), m_(X.size()), alpha_(m_, 0.0), error_(m_), cache_(h.kernel, X),
        rng_(h.seed * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL) {
    for (std::size_t i = 0; i < m_; ++i) error_[i] = -static_cast<double>(y_[i]);
  }

  void solve() {
    int pass = 0;
    bool examine_all = true;
    while (true) {
      int changed = 0;
      if (examine_all) {
        for (std::size_t i = 0; i < m_; ++i) changed += examine(i);
      } else {
        for (std::size_t i = 0; i < m_; ++i)
          if (alpha_[i] > kSvCutoff && alpha_[i] < h_.C - kSvCutoff) changed += examine(i);
      }
      if (examine_all) {
        if (changed == 0) break;  // full pass with no violators: converged
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
      if (++pass > h_.max_passes) {
        std::ostringstream diag;
        diag << "SMO did not converge within " << h_.max_passes
             << " passes (dual objective so far: "
             << dual_objective(h_.kernel, X_, y_, alpha_) << ")";
        throw SvmError(diag.str());
      }
    }
  }

  const std::vector<double>& alpha() const { return alpha_; }
  double bias() const { return b_; }

private:
  int examine(std::size_t i2) {
    const double y2 = y_[i2], a2 = alpha_[i2], e2 = error_[i2];
    const double r2 = e2 * y2;
    const double tol = h_.kkt_tolerance;
    if (!((r2 < -tol && a2 < h_.C - kSvCutoff) || (r2 > tol && a2 > kSvCutoff))) return 0;

    // Second-choice heuristic: largest |E1 - E2| among non-bound points.
    std::ptrdiff_t best = -1;
    double best_gap = -1;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == i2 || alpha_[i] <= kSvCutoff || alpha_[i] >= h_.C - kSvCutoff) continue;
      double gap = std::abs(error_[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (best >= 0 && take_step(static_cast<std::size_t>(best), i2)) return 1;

    std::size_t start = rng_() % m_;
    for (std::size_t k = 0; k < m_; ++k) {
      std::size_t i1 = (start + k) % m_;
      if (i1 == i2 || alpha_[i1] <= kSvCutoff || alpha_[i1] >= h_.C - kSvCutoff) continue;
      if (take_step(i1, i2)) return 1;
    }
    start = rng_() % m_;
    for (std::size_t k = 0; k < m_; ++k) {
      std::size_t i1 = (start + k) % m_;
      if (i1 == i2) continue;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    const double y1 = y_[i1], y2 = y_[i2];
    const double a1_old = alpha_[i1], a2_old = alpha_[i2];
    const double e1 = error_[i1], e2 = error_[i2];
    const double s = y1 * y2;
    const double C = h_.C;

    double lo, hi;
    if (s < 0) {
      lo = std::max(0.0, a2_old - a1_old);
      hi = std::min(C, C + a2_old - a1_old);
    } else {
      lo = std::max(0.0, a1_old + a2_old - C);
      hi = std::min(C, a1_old + a2_old);
    }
    if (hi - lo < 1e-12) return false;

    const auto& k1 = cache_.row(i1);
    const double k11 = k1[i1], k12 = k1[i2];
    const double k22 = cache_.row(i2)[i2];
    const double eta = k11 + k22 - 2 * k12;

    double a2_new;
    if (eta > 1e-12) {
      a2_new = a2_old + y2 * (e1 - e2) / eta;
      a2_new = std::clamp(a2_new, lo, hi);
    } else {
      // Flat or indefinite direction: evaluate the objective at both ends.
      double f1 = y1 * (e1 - b_) - a1_old * k11 - s * a2_old * k12;
      double f2 = y2 * (e2 - b_) - s * a1_old * k12 - a2_old * k22;
      double l1 = a1_old + s * (a2_old - lo);
      double h1 = a1_old + s * (a2_old - hi);
      double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                      s * lo * l1 * k12;
      double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                      s * hi * h1 * k12;
      if (obj_lo < obj_hi - 1e-12)
        a2_new = lo;
      else if (obj_hi < obj_lo - 1e-12)
        a2_new = hi;
      else
        return false;
    }
    if (std::abs(a2_new - a2_old) < 1e-12 * (a2_new + a2_old + 1e-12)) return false;

    const double a1_new = a1_old + s * (a2_old - a2_new);
    const double da1 = a1_new - a1_old, da2 = a2_new - a2_old;

    const double b1 = b_ - e1 - y1 * da1 * k11 - y2 * da2 * k12;
    const double b2 = b_ - e2 - y1 * da1 * k12 - y2 * da2 * k22;
    double b_new;
    if (a1_new > kSvCutoff && a1_new < C - kSvCutoff)
      b_new = b1;
    else if (a2_new > kSvCutoff && a2_new < C - kSvCutoff)
      b_new = b2;
    else
      b_new = 0.5 * (b1 + b2);

    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    const auto& row1 = cache_.row(i1);
    const auto& row2 = cache_.row(i2);
    for (std::size_t i = 0; i < m_; ++i)
      error_[i] += y1 * da1 * row1[i] + y2 * da2 * row2[i] + (b_new - b_);
    b_ = b_new;
    return true;
  }

  const std::vector<std::vector<double>>& X_;
  const std::vector<int>& y_;
  Hyperparams h_;
  std::size_t m_;
  std::vector<double> alpha_;
  std::vector<double> error_;  // f(x_i) - y_i
  double b_ = 0.0;
  KernelCache cache_;
  std::mt19937_64 rng_;
};

}  // namespace

SvmModel train(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
               const Hyperparams& h) {
  if (X.size() != y.size() || X.size() < 2)
    throw SvmError("train: need at least 2 labeled samples");
  if (h.C <= 0 || h.kkt_tolerance <= 0) throw SvmError("train: C and kkt_tolerance must be > 0");
  bool has_pos = false, has_neg = false;
  for (int yi : y) {
    if (yi == +1) has_pos = true;
    else if (yi == -1) has_neg = true;
    else throw SvmError("train: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw SvmError("train: SingleClass input (need both labels)");
  for (const auto& row : X)
    for (double v : row)
      if (!std::isfinite(v)) throw SvmError("train: non-finite feature value");

  SmoSolver solver(X, y, h);
  solver.solve();

  SvmModel m;
  m.kernel = h.kernel;
  m.bias = solver.bias();
  const auto& alpha = solver.alpha();
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (alpha[i] > kSvCutoff) {
      m.support_vectors.push_back(X[i]);
      m.sv_labels.push_back(y[i]);
      m.alphas.push_back(std::min(alpha[i], h.C));
      m.sv_original_indices.push_back(static_cast<int>(i));
    }
  }
  if (m.support_vectors.empty()) throw SvmError("train: no support vectors (degenerate solution)");
  return m;
}

double decision_value(const SvmModel& m, std::span<const double> x) {
  if (x.size() != m.dim()) throw SvmError("decision_value: dimension mismatch");
  double sum = m.bias;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
    sum += m.alphas[i] * m.sv_labels[i] * kernel_eval(m.kernel, m.support_vectors[i], x);
  return sum;
}

int classify(const SvmModel& m, std::span<const double> x) {
  return decision_value(m, x) >= 0.0 ? +1 : -1;
}

double similarity(const SvmModel& m, std::size_t sv_index, std::span<const double> x) {
  if (sv_index >= m.support_vectors.size()) throw SvmError("similarity: invalid sv index");
  return m.alphas[sv_index] * m.sv_labels[sv_index] *
         kernel_eval(m.kernel, m.support_vectors[sv_index], x);
}

std::vector<int> true_positive_svs(const SvmModel& m) {
  std::vector<int> out;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
    if (m.sv_labels[i] == +1 && classify(m, m.support_vectors[i]) == +1)
      out.push_back(static_cast<int>(i));
  return out;
}

double dual_objective(const KernelSpec& k, const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y, const std::vector<double>& alpha) {
  double obj = 0;
  for (double a : alpha) obj += a;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (alpha[i] == 0) continue;
    for (std::size_t j = 0; j < X.size(); ++j) {
      if (alpha[j] == 0) continue;
      obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * kernel_eval(k, X[i], X[j]);
    }
  }
  return obj;
}

std::string model_to_text(const SvmModel& m, const BinarizedMatrix* preprocessing) {
  std::ostringstream out;
  out << "svmmodel v1\n";
  out << "kernel " << kernel_to_string(m.kernel) << '\n';
  out << "bias " << format_double_roundtrip(m.bias) << '\n';
  out << "nsv " << m.support_vectors.size() << '\n';
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
    out << "sv " << format_double_roundtrip(m.alphas[i]) << ' ' << m.sv_labels[i] << ' '
        << m.sv_original_indices[i];
    for (double v : m.support_vectors[i]) out << ' ' << format_double_roundtrip(v);
    out << '\n';
  }
  if (preprocessing) {
    out << "preprocessing " << preprocessing->cols() << '\n';
    for (std::size_t c = 0; c < preprocessing->cols(); ++c) {
      const auto& ref = preprocessing->column_map[c];
      out << "col " << preprocessing->column_names[c] << ' ' << ref.feature << ' '
          << ref.domain_index << ' '
          << format_double_roundtrip(preprocessing->numeric_scaling[c].first) << ' '
          << format_double_roundtrip(preprocessing->numeric_scaling[c].second) << '\n';
    }
  }
  return out.str();
}

SvmModel model_from_text(const std::string& text, BinarizedMatrix* preprocessing) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "svmmodel v1")
    throw SvmError("model file: bad or missing version header");
  SvmModel m;
  std::size_t nsv = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "kernel") {
      std::string rest;
      std::getline(ls, rest);
      m.kernel = kernel_from_string(trim(rest));
    } else if (kw == "bias") {
      ls >> m.bias;
    } else if (kw == "nsv") {
      ls >> nsv;
    } else if (kw == "sv") {
      double a;
      int yl, oi;
      ls >> a >> yl >> oi;
      std::vector<double> x;
      double v;
      while (ls >> v) x.push_back(v);
      if (!m.support_vectors.empty() && x.size() != m.support_vectors[0].size())
        throw SvmError("model file: inconsistent support vector dimension");
      m.alphas.push_back(a);
      m.sv_labels.push_back(yl);
      m.sv_original_indices.push_back(oi);
      m.support_vectors.push_back(std::move(x));
    } else if (kw == "preprocessing") {
      std::size_t ncols;
      ls >> ncols;
      if (preprocessing) {
        preprocessing->column_map.clear();
        preprocessing->column_names.clear();
        preprocessing->numeric_scaling.clear();
      }
      for (std::size_t c = 0; c < ncols; ++c) {
        if (!std::getline(in, line)) throw SvmError("model file: truncated preprocessing block");
        std::istringstream cs(trim(line));
        std::string ckw, name;
        int feature, domain_index;
        double mean, sd;
        cs >> ckw >> name >> feature >> domain_index >> mean >> sd;
        if (ckw != "col") throw SvmError("model file: expected 'col' line");
        if (preprocessing) {
          preprocessing->column_map.push_back({feature, domain_index});
          preprocessing->column_names.push_back(name);
          preprocessing->numeric_scaling.emplace_back(mean, sd);
        }
      }
    } else {
      throw SvmError("model file: unknown keyword '" + kw + "'");
    }
  }
  if (m.support_vectors.size() != nsv)
    throw SvmError("model file: nsv mismatch");
  return m;
}

Hyperparams grid_search(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                        const KernelSpec& kernel_family, int folds, std::uint64_t seed,
                        int threads) {
  const std::vector<double> c_grid{0.1, 1.0, 10.0, 100.0};
  const double inv_d = X.empty() || X[0].empty() ? 1.0 : 1.0 / static_cast<double>(X[0].size());
  const std::vector<double> gamma_grid{inv_d, 0.1, 1.0};

  std::vector<Hyperparams> combos;
  for (double C : c_grid) {
    if (std::holds_alternative<LinearKernel>(kernel_family)) {
      Hyperparams h;
      h.C = C;
      h.kernel = kernel_family;
      h.seed = seed;
      combos.push_back(h);
    } else {
      for (double g : gamma_grid) {
        Hyperparams h;
        h.C = C;
        h.seed = seed;
        if (const auto* p = std::get_if<PolynomialKernel>(&kernel_family)) {
          PolynomialKernel pk = *p;
          pk.gamma = g;
          h.kernel = pk;
        } else {
          h.kernel = RbfKernel{g};
        }
        combos.push_back(h);
      }
    }
  }

  // Deterministic stratified fold assignment.
  std::vector<int> fold_of(X.size());
  {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < X.size(); ++i) (y[i] > 0 ? pos : neg).push_back(i);
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    for (std::size_t k = 0; k < pos.size(); ++k) fold_of[pos[k]] = static_cast<int>(k % folds);
    for (std::size_t k = 0; k < neg.size(); ++k) fold_of[neg[k]] = static_cast<int>(k % folds);
  }

  std::vector<double> scores(combos.size(), -1.0);
  auto eval_combo = [&](std::size_t ci) {
    std::size_t correct = 0, total = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<std::vector<double>> Xtr, Xte;
      std::vector<int> ytr, yte;
      for (std::size_t i = 0; i < X.size(); ++i) {
        if (fold_of[i] == f) {
          Xte.push_back(X[i]);
          yte.push_back(y[i]);
        } else {
          Xtr.push_back(X[i]);
          ytr.push_back(y[i]);
        }
      }
      if (Xte.empty()) continue;
      try {
        SvmModel m = train(Xtr, ytr, combos[ci]);
        for (std::size_t i = 0; i < Xte.size(); ++i) {
          correct += classify(m, Xte[i]) == yte[i];
          ++total;
        }
      } catch (const SvmError&) {
        total += Xte.size();  // non-converging combo scores its misses
      }
    }
    scores[ci] = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  };

  if (threads <= 1) {
    for (std::size_t ci = 0; ci < combos.size(); ++ci) eval_combo(ci);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t ci = next.fetch_add(1); ci < combos.size(); ci = next.fetch_add(1))
          eval_combo(ci);
      });
    for (auto& th : pool) th.join();
  }

  std::size_t best = 0;
  for (std::size_t ci = 1; ci < combos.size(); ++ci)
    if (scores[ci] > scores[best]) best = ci;
  return combos[best];
}

}  // namespace shapfoil
