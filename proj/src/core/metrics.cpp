// Copyright 2026 The cicreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jacobian.hpp"
#include "parallel.hpp"
#include "sampling.hpp"
#include "ssim.hpp"

namespace cicreg {

namespace {

void require_same(const Volume& a, const Volume& b, const char* who) {
  if (!(a.dims() == b.dims()))
    throw InvalidInput(std::string(who) + ": dimension mismatch " + to_string(a.dims()) + " vs " + to_string(b.dims()));
}

template <class A, class B>
double pearson(std::size_t n, A&& a, B&& b, bool a_const, bool b_const, const char* who) {
  if (a_const && b_const) throw UndefinedMetric(std::string(who) + ": both inputs are constant");
  if (a_const || b_const) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double ma = ordered_sum(n, a) * inv_n;
  const double mb = ordered_sum(n, b) * inv_n;
  const double cov = ordered_sum(n, [&](std::size_t i) { return (a(i) - ma) * (b(i) - mb); });
  const double va = ordered_sum(n, [&](std::size_t i) { return (a(i) - ma) * (a(i) - ma); });
  const double vb = ordered_sum(n, [&](std::size_t i) { return (b(i) - mb) * (b(i) - mb); });
  return cov / (std::sqrt(va) * std::sqrt(vb));
}

template <class It>
bool is_constant(It first, It last) {
  if (first == last) return true;
  const auto [lo, hi] = std::minmax_element(first, last);
  return *lo == *hi;
}

Grid gradient_magnitude(const Volume& v) {
  const Dims& d = v.dims();
  detail::require_jacobian_dims(d, "gradient_similarity");
  Grid out(d);
  auto data = v.data();
  detail::for_each_voxel(d, [&](std::size_t i, int x, int y, int z) {
    const int pos[3] = {x, y, z};
    double ss = 0.0;
    for (int a = 0; a < 3; ++a) {
      const auto t = detail::derivative_taps(pos[a], d[a]);
      const auto stride = static_cast<std::ptrdiff_t>(d.stride(a));
      double g = 0.0;
      for (int k = 0; k < t.count; ++k)
        g += t.coeff[k] * data[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + t.offset[k] * stride)];
      ss += g * g;
    }
    out.data[i] = std::sqrt(ss);
  });
  return out;
}

int bin_of(double v, int bins) {
  if (!(v > 0.0)) return 0;
  const int b = static_cast<int>(v * bins);
  return b >= bins ? bins - 1 : b;
}

}  // namespace

double ncc(const Volume& a, const Volume& b) {
  require_same(a, b, "ncc");
  auto da = a.data(), db = b.data();
  return pearson(
      a.size(), [&](std::size_t i) { return static_cast<double>(da[i]); },
      [&](std::size_t i) { return static_cast<double>(db[i]); }, is_constant(da.begin(), da.end()),
      is_constant(db.begin(), db.end()), "ncc");
}

double mutual_information(const Volume& a, const Volume& b, int bins) {
  require_same(a, b, "mutual_information");
  if (bins < 2) throw InvalidInput("mutual_information: bins must be >= 2");
  const auto nb = static_cast<std::size_t>(bins);
  std::vector<std::uint64_t> joint(nb * nb, 0), ha(nb, 0), hb(nb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int ia = bin_of(a[i], bins), ib = bin_of(b[i], bins);
    ++joint[static_cast<std::size_t>(ia) * nb + static_cast<std::size_t>(ib)];
    ++ha[static_cast<std::size_t>(ia)];
    ++hb[static_cast<std::size_t>(ib)];
  }
  const double n = static_cast<double>(a.size());
  auto term = [&](std::size_t i, std::size_t j) {
    const std::uint64_t c = joint[i * nb + j];
    if (c == 0) return 0.0;
    const double pij = static_cast<double>(c) / n;
    const double pi = static_cast<double>(ha[i]) / n;
    const double pj = static_cast<double>(hb[j]) / n;
    return pij * std::log(pij / (pi * pj));
  };
  // Pairing (i, j) with (j, i) makes the sum bit-identical under argument swap.
  double mi = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    mi += term(i, i);
    for (std::size_t j = i + 1; j < nb; ++j) mi += term(i, j) + term(j, i);
  }
  return std::max(mi, 0.0);
}

double mse(const Volume& a, const Volume& b) {
  require_same(a, b, "mse");
  return ordered_sum(a.size(), [&](std::size_t i) {
    const double e = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    return e * e;
  }) / static_cast<double>(a.size());
}

double mae(const Volume& a, const Volume& b) {
  require_same(a, b, "mae");
  return ordered_sum(a.size(), [&](std::size_t i) {
    return std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }) / static_cast<double>(a.size());
}

double psnr(const Volume& a, const Volume& b) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / m);
}

double dice(const Volume& a, const Volume& b, double threshold) {
  require_same(a, b, "dice");
  const MaskVolume ma = binarize(a, threshold), mb = binarize(b, threshold);
  std::size_t inter = 0;
  for (std::size_t i = 0; i < ma.data.size(); ++i) inter += ma.data[i] & mb.data[i];
  const std::size_t total = ma.count_set() + mb.count_set();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(total);
}

double gradient_similarity(const Volume& a, const Volume& b) {
  require_same(a, b, "gradient_similarity");
  const Grid ga = gradient_magnitude(a), gb = gradient_magnitude(b);
  return pearson(
      ga.size(), [&](std::size_t i) { return ga.data[i]; }, [&](std::size_t i) { return gb.data[i]; },
      is_constant(ga.data.begin(), ga.data.end()), is_constant(gb.data.begin(), gb.data.end()),
      "gradient_similarity");
}

double ssim(const Volume& a, const Volume& b) { return ssim_map(a, b, SsimParams{}).mean; }

MetricReport evaluate_all(const Volume& warped, const Volume& fixed) {
  require_same(warped, fixed, "evaluate_all");
  MetricReport r;
  auto guarded = [&](std::optional<double>& slot, const char* name, auto&& fn) {
    try {
      slot = fn();
    } catch (const UndefinedMetric& e) {
      slot.reset();
      r.warnings.push_back(std::string(name) + ": " + e.what());
    }
  };
  guarded(r.ssim, "ssim", [&] { return ssim(warped, fixed); });
  guarded(r.ncc, "ncc", [&] { return ncc(warped, fixed); });
  guarded(r.mi, "mi", [&] { return mutual_information(warped, fixed); });
  guarded(r.psnr, "psnr", [&] { return psnr(warped, fixed); });
  guarded(r.mse, "mse", [&] { return mse(warped, fixed); });
  guarded(r.mae, "mae", [&] { return mae(warped, fixed); });
  guarded(r.dice, "dice", [&] { return dice(warped, fixed); });
  guarded(r.gradient_similarity, "gradient_similarity", [&] { return gradient_similarity(warped, fixed); });
  return r;
}

}  // namespace cicreg
