// Copyright 2026 The opfdist Authors
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

#include "opfdist/distances.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "opfdist/errors.hpp"

namespace opfdist {

namespace {

using Span = std::span<const double>;
using Kernel = double (*)(Span, Span);

constexpr double kMax = std::numeric_limits<double>::max();

// Saturating arithmetic. As long as every operand is finite, no operation
// below can produce NaN, so clamping each intermediate keeps results total.
inline double sat(double v) noexcept {
    if (v > kMax) return kMax;
    if (v < -kMax) return -kMax;
    return v;
}

inline double add(double a, double b) noexcept { return sat(a + b); }
inline double sub(double a, double b) noexcept { return sat(a - b); }
inline double mul(double a, double b) noexcept { return sat(a * b); }
inline double sq(double a) noexcept { return sat(a * a); }
inline double exp_sat(double v) noexcept { return sat(std::exp(v)); }
inline double sqrt_clamped(double v) noexcept { return v <= 0.0 ? 0.0 : std::sqrt(v); }
inline double log_nonneg(double v) noexcept { return std::log(v == 0.0 ? kDegenerateEpsilon : v); }

inline double ratio(double num, double den) noexcept {
    if (den == 0.0) {
        if (num == 0.0) return 0.0;
        den = kDegenerateEpsilon;
    }
    return sat(num / den);
}

inline double abs_diff(double a, double b) noexcept { return std::fabs(sub(a, b)); }

// Running sums shared by several measures.
double sum_abs_diff(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s = add(s, abs_diff(x[i], y[i]));
    return s;
}

double sum_sq_diff(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s = add(s, sq(sub(x[i], y[i])));
    return s;
}

struct InnerProducts {
    double xy = 0.0, xx = 0.0, yy = 0.0;
};

InnerProducts inner_products(Span x, Span y) {
    InnerProducts p;
    for (std::size_t i = 0; i < x.size(); ++i) {
        p.xy = add(p.xy, mul(x[i], y[i]));
        p.xx = add(p.xx, sq(x[i]));
        p.yy = add(p.yy, sq(y[i]));
    }
    return p;
}

double sum_sqrt_diff_sq(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, sq(sqrt_clamped(x[i]) - sqrt_clamped(y[i])));
    return s;
}

double sum_sq_diff_over(Span x, Span y, Span den) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s = add(s, ratio(sq(sub(x[i], y[i])), den[i]));
    return s;
}

// sum_i a_i * exp(2 a_i / (a_i + b_i))
double sum_self_weighted_exp(Span a, Span b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s = add(s, mul(a[i], exp_sat(ratio(mul(2.0, a[i]), add(a[i], b[i])))));
    return s;
}

// ---- Lp -------------------------------------------------------------------

double chebyshev(Span x, Span y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, abs_diff(x[i], y[i]));
    return m;
}

double chi_squared(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(sq(sub(x[i], y[i])), std::fabs(add(x[i], y[i]))));
    return std::sqrt(s);
}

double euclidean(Span x, Span y) { return std::sqrt(sum_sq_diff(x, y)); }
double gaussian(Span x, Span y) { return std::exp(-std::sqrt(sum_sq_diff(x, y))); }
double log_euclidean(Span x, Span y) { return log_nonneg(std::sqrt(sum_sq_diff(x, y))); }
double manhattan(Span x, Span y) { return sum_abs_diff(x, y); }

// ---- L1 -------------------------------------------------------------------

double bray_curtis(Span x, Span y) {
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) den = add(den, add(x[i], y[i]));
    return ratio(sum_abs_diff(x, y), den);
}

double canberra(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(abs_diff(x[i], y[i]), add(std::fabs(x[i]), std::fabs(y[i]))));
    return s;
}

double gower(Span x, Span y) { return sum_abs_diff(x, y) / static_cast<double>(x.size()); }

double kulczynski(Span x, Span y) {
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) den = add(den, std::min(x[i], y[i]));
    return ratio(sum_abs_diff(x, y), den);
}

double lorentzian(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s = add(s, exp_sat(1.0 + abs_diff(x[i], y[i])));
    return s;
}

double non_intersection(Span x, Span y) { return 0.5 * sum_abs_diff(x, y); }

double soergel(Span x, Span y) {
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) den = add(den, std::max(x[i], y[i]));
    return ratio(sum_abs_diff(x, y), den);
}

// ---- Inner product --------------------------------------------------------
// The printed chord/cosine normalise by the product of the squared norms
// (not by the product of the norms); reproduced as printed.

double chord(Span x, Span y) {
    const auto p = inner_products(x, y);
    return sqrt_clamped(sub(2.0, mul(2.0, ratio(p.xy, mul(p.xx, p.yy)))));
}

double cosine(Span x, Span y) {
    const auto p = inner_products(x, y);
    return sub(1.0, ratio(p.xy, mul(p.xx, p.yy)));
}

double dice(Span x, Span y) {
    const auto p = inner_products(x, y);
    return sub(1.0, ratio(p.xy, add(p.xx, p.yy)));
}

double jaccard(Span x, Span y) {
    const auto p = inner_products(x, y);
    return ratio(sum_sq_diff(x, y), sub(add(p.xx, p.yy), p.xy));
}

// ---- Squared chord --------------------------------------------------------

double bhattacharyya(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s = add(s, sqrt_clamped(mul(x[i], y[i])));
    return -exp_sat(s);
}

double hellinger(Span x, Span y) { return std::sqrt(mul(2.0, sum_sqrt_diff_sq(x, y))); }
double matusita(Span x, Span y) { return std::sqrt(sum_sqrt_diff_sq(x, y)); }
double squared_chord(Span x, Span y) { return sum_sqrt_diff_sq(x, y); }

// ---- Squared L2 -----------------------------------------------------------

double additive_symmetric_chi2(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(mul(sq(sub(x[i], y[i])), add(x[i], y[i])), mul(x[i], y[i])));
    return mul(2.0, s);
}

double average_euclidean(Span x, Span y) {
    return std::sqrt(sum_sq_diff(x, y) / static_cast<double>(x.size()));
}

double clark(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, sq(ratio(sub(x[i], y[i]), add(std::fabs(x[i]), std::fabs(y[i])))));
    return std::sqrt(s);
}

double divergence(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(sq(sub(x[i], y[i])), sq(add(x[i], y[i]))));
    return mul(2.0, s);
}

double log_squared_euclidean(Span x, Span y) { return log_nonneg(sum_sq_diff(x, y)); }

double mean_censored_euclidean(Span x, Span y) {
    double count = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (add(sq(x[i]), sq(y[i])) != 0.0) count += 1.0;
    return ratio(sum_sq_diff(x, y), count);
}

double neyman_chi2(Span x, Span y) { return sum_sq_diff_over(x, y, x); }
double pearson_chi2(Span x, Span y) { return sum_sq_diff_over(x, y, y); }

double sum_sq_diff_over_sum(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(sq(sub(x[i], y[i])), add(x[i], y[i])));
    return s;
}

double sangvi_chi2(Span x, Span y) { return mul(2.0, sum_sq_diff_over_sum(x, y)); }
double squared_chi2(Span x, Span y) { return sum_sq_diff_over_sum(x, y); }
double squared_euclidean(Span x, Span y) { return sum_sq_diff(x, y); }

// ---- Shannon entropy ------------------------------------------------------
// Exponential forms exactly as catalogued, not the logarithmic textbook ones.

double jeffreys(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, mul(sub(x[i], y[i]), exp_sat(ratio(x[i], y[i]))));
    return s;
}

double jensen(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xe = mul(x[i], exp_sat(x[i]));
        const double ye = mul(y[i], exp_sat(y[i]));
        const double m = add(x[i], y[i]) * 0.5;
        s = add(s, sub(add(xe, ye) * 0.5, mul(m, exp_sat(m))));
    }
    return 0.5 * s;
}

double jensen_shannon(Span x, Span y) {
    return 0.5 * add(sum_self_weighted_exp(x, y), sum_self_weighted_exp(y, x));
}

double k_divergence(Span x, Span y) { return sum_self_weighted_exp(x, y); }

double kullback_leibler(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s = add(s, mul(x[i], exp_sat(ratio(x[i], y[i]))));
    return s;
}

double topsoe(Span x, Span y) { return add(sum_self_weighted_exp(x, y), sum_self_weighted_exp(y, x)); }

// ---- Vicissitude ----------------------------------------------------------

double max_symmetric_chi2(Span x, Span y) {
    return std::max(sum_sq_diff_over(x, y, x), sum_sq_diff_over(x, y, y));
}

double min_symmetric_chi2(Span x, Span y) {
    return std::min(sum_sq_diff_over(x, y, x), sum_sq_diff_over(x, y, y));
}

double vicis_symmetric_1(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(sq(sub(x[i], y[i])), sq(std::min(x[i], y[i]))));
    return s;
}

double vicis_symmetric_2(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(sq(sub(x[i], y[i])), std::min(x[i], y[i])));
    return s;
}

double vicis_symmetric_3(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(sq(sub(x[i], y[i])), std::max(x[i], y[i])));
    return s;
}

double vicis_wave_hedges(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s = add(s, ratio(abs_diff(x[i], y[i]), std::min(x[i], y[i])));
    return s;
}

// ---- Other ----------------------------------------------------------------

double hamming(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i]) s += 1.0;
    return s;
}

double hassanat(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lo = std::min(x[i], y[i]);
        const double hi = std::max(x[i], y[i]);
        // Both denominators are >= 1, so no degenerate handling is needed.
        const double term = lo >= 0.0
            ? 1.0 - ratio(add(1.0, lo), add(1.0, hi))
            : 1.0 - ratio(add(add(1.0, lo), -lo), add(add(1.0, hi), -lo));
        s = add(s, term);
    }
    return s;
}

double chi2_statistic(Span x, Span y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = add(x[i], y[i]) * 0.5;
        s = add(s, ratio(sub(x[i], m), m));
    }
    return s;
}

constexpr std::array<Kernel, kDistanceCount> kKernels = {
    chebyshev, chi_squared, euclidean, gaussian, log_euclidean, manhattan,
    bray_curtis, canberra, gower, kulczynski, lorentzian, non_intersection, soergel,
    chord, cosine, dice, jaccard,
    bhattacharyya, hellinger, matusita, squared_chord,
    additive_symmetric_chi2, average_euclidean, clark, divergence, log_squared_euclidean,
    mean_censored_euclidean, neyman_chi2, pearson_chi2, sangvi_chi2, squared_chi2,
    squared_euclidean,
    jeffreys, jensen, jensen_shannon, k_divergence, kullback_leibler, topsoe,
    max_symmetric_chi2, min_symmetric_chi2, vicis_symmetric_1, vicis_symmetric_2,
    vicis_symmetric_3, vicis_wave_hedges,
    hamming, hassanat, chi2_statistic,
};

using T = Taxonomy;

//                                       nonneg  identity symmetric
constexpr std::array<DistanceInfo, kDistanceCount> kRegistry = {{
    {DistanceId::D1, "D1", "Chebyshev", T::Lp, false, true, true},
    {DistanceId::D2, "D2", "Chi-Squared", T::Lp, false, true, true},
    {DistanceId::D3, "D3", "Euclidean", T::Lp, false, true, true},
    {DistanceId::D4, "D4", "Gaussian", T::Lp, false, false, true},
    {DistanceId::D5, "D5", "Log-Euclidean", T::Lp, false, false, true},
    {DistanceId::D6, "D6", "Manhattan", T::Lp, false, true, true},
    {DistanceId::D7, "D7", "Bray-Curtis", T::L1, false, true, true},
    {DistanceId::D8, "D8", "Canberra", T::L1, false, true, true},
    {DistanceId::D9, "D9", "Gower", T::L1, false, true, true},
    {DistanceId::D10, "D10", "Kulczynski", T::L1, false, true, true},
    {DistanceId::D11, "D11", "Lorentzian", T::L1, false, false, true},
    {DistanceId::D12, "D12", "Non-Intersection", T::L1, false, true, true},
    {DistanceId::D13, "D13", "Soergel", T::L1, false, true, true},
    {DistanceId::D14, "D14", "Chord", T::InnerProduct, false, false, true},
    {DistanceId::D15, "D15", "Cosine", T::InnerProduct, false, false, true},
    {DistanceId::D16, "D16", "Dice", T::InnerProduct, false, false, true},
    {DistanceId::D17, "D17", "Jaccard", T::InnerProduct, false, true, true},
    {DistanceId::D18, "D18", "Bhattacharyya", T::SquaredChord, true, false, true},
    {DistanceId::D19, "D19", "Hellinger", T::SquaredChord, true, true, true},
    {DistanceId::D20, "D20", "Matusita", T::SquaredChord, true, true, true},
    {DistanceId::D21, "D21", "Squared Chord", T::SquaredChord, true, true, true},
    {DistanceId::D22, "D22", "Additive Symmetric Chi-Squared", T::SquaredL2, false, true, true},
    {DistanceId::D23, "D23", "Average Euclidean", T::SquaredL2, false, true, true},
    {DistanceId::D24, "D24", "Clark", T::SquaredL2, false, true, true},
    {DistanceId::D25, "D25", "Divergence", T::SquaredL2, false, true, true},
    {DistanceId::D26, "D26", "Log-Squared Euclidean", T::SquaredL2, false, false, true},
    {DistanceId::D27, "D27", "Mean Censored Euclidean", T::SquaredL2, false, true, true},
    {DistanceId::D28, "D28", "Neyman Chi-Squared", T::SquaredL2, false, true, false},
    {DistanceId::D29, "D29", "Pearson Chi-Squared", T::SquaredL2, false, true, false},
    {DistanceId::D30, "D30", "Sangvi Chi-Squared", T::SquaredL2, false, true, true},
    {DistanceId::D31, "D31", "Squared Chi-Squared", T::SquaredL2, false, true, true},
    {DistanceId::D32, "D32", "Squared Euclidean", T::SquaredL2, false, true, true},
    {DistanceId::D33, "D33", "Jeffreys", T::ShannonEntropy, false, true, false},
    {DistanceId::D34, "D34", "Jensen", T::ShannonEntropy, false, true, true},
    {DistanceId::D35, "D35", "Jensen-Shannon", T::ShannonEntropy, false, false, true},
    {DistanceId::D36, "D36", "K-Divergence", T::ShannonEntropy, false, false, false},
    {DistanceId::D37, "D37", "Kullback-Leibler", T::ShannonEntropy, false, false, false},
    {DistanceId::D38, "D38", "Topsoe", T::ShannonEntropy, false, false, true},
    {DistanceId::D39, "D39", "Max Symmetric Chi-Squared", T::Vicissitude, false, true, true},
    {DistanceId::D40, "D40", "Min Symmetric Chi-Squared", T::Vicissitude, false, true, true},
    {DistanceId::D41, "D41", "Vicis Symmetric 1", T::Vicissitude, false, true, true},
    {DistanceId::D42, "D42", "Vicis Symmetric 2", T::Vicissitude, false, true, true},
    {DistanceId::D43, "D43", "Vicis Symmetric 3", T::Vicissitude, false, true, true},
    {DistanceId::D44, "D44", "Vicis-Wave Hedges", T::Vicissitude, false, true, true},
    {DistanceId::D45, "D45", "Hamming", T::Other, false, true, true},
    {DistanceId::D46, "D46", "Hassanat", T::Other, false, true, true},
    {DistanceId::D47, "D47", "Chi-Squared Statistic", T::Other, false, true, false},
}};

std::size_t index_of(DistanceId id) noexcept { return static_cast<std::size_t>(id) - 1; }

void check_operands(DistanceId id, Span x, Span y, EvalOptions options) {
    if (x.size() != y.size())
        fail(ErrorKind::DimensionMismatch, "vectors of dimension " + std::to_string(x.size()) +
                                               " and " + std::to_string(y.size()));
    if (x.empty()) fail(ErrorKind::InvalidArgument, "vectors must have at least one component");
    if (options.strict && kRegistry[index_of(id)].requires_nonnegative_input) {
        const auto negative = [](double v) { return v < 0.0; };
        if (std::any_of(x.begin(), x.end(), negative) || std::any_of(y.begin(), y.end(), negative))
            fail(ErrorKind::DomainViolation,
                 std::string(kRegistry[index_of(id)].code) + " requires non-negative components");
    }
}

} // namespace

std::string_view to_string(Taxonomy taxonomy) noexcept {
    switch (taxonomy) {
    case Taxonomy::Lp: return "Lp";
    case Taxonomy::L1: return "L1";
    case Taxonomy::InnerProduct: return "InnerProduct";
    case Taxonomy::SquaredChord: return "SquaredChord";
    case Taxonomy::SquaredL2: return "SquaredL2";
    case Taxonomy::ShannonEntropy: return "ShannonEntropy";
    case Taxonomy::Vicissitude: return "Vicissitude";
    case Taxonomy::Other: return "Other";
    }
    return "?";
}

std::span<const DistanceInfo> registry() noexcept { return kRegistry; }

const DistanceInfo& info(DistanceId id) noexcept { return kRegistry[index_of(id)]; }

std::optional<DistanceId> parse_distance_code(std::string_view text) {
    if (!text.empty() && (text.front() == 'D' || text.front() == 'd')) text.remove_prefix(1);
    unsigned value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) return std::nullopt;
    if (value < 1 || value > kDistanceCount) return std::nullopt;
    return static_cast<DistanceId>(value);
}

std::vector<DistanceId> parse_distance_list(std::string_view text) {
    std::vector<DistanceId> out;
    if (text == "all") {
        for (const auto& entry : kRegistry) out.push_back(entry.id);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                        : comma - start);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front())))
            token.remove_prefix(1);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back())))
            token.remove_suffix(1);
        const auto id = parse_distance_code(token);
        if (!id) fail(ErrorKind::InvalidArgument, "unknown distance code '" + std::string(token) + "'");
        out.push_back(*id);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double evaluate(DistanceId id, std::span<const double> x, std::span<const double> y,
                EvalOptions options) {
    check_operands(id, x, y, options);
    return kKernels[index_of(id)](x, y);
}

double evaluate(DistanceId id, const FeatureVector& x, const FeatureVector& y, EvalOptions options) {
    return evaluate(id, x.values(), y.values(), options);
}

std::vector<double> evaluate_batch(DistanceId id, const FeatureVector& query,
                                   std::span<const FeatureVector> corpus, EvalOptions options) {
    std::vector<double> out;
    out.reserve(corpus.size());
    for (const auto& v : corpus) out.push_back(evaluate(id, query.values(), v.values(), options));
    return out;
}

std::string_view to_string(Axiom axiom) noexcept {
    switch (axiom) {
    case Axiom::Identity: return "identity";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::TriangleInequality: return "triangle";
    case Axiom::NonNegativity: return "non-negativity";
    }
    return "?";
}

AxiomReport check_axioms(DistanceId id, std::span<const FeatureVector> samples, double tolerance,
                         EvalOptions options) {
    if (samples.empty()) fail(ErrorKind::Empty, "axiom check needs at least one sample");
    if (!(tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
    const std::size_t m = samples.size();
    std::vector<double> d(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            d[i * m + j] = evaluate(id, samples[i].values(), samples[j].values(), options);
    const auto at = [&](std::size_t i, std::size_t j) { return d[i * m + j]; };

    AxiomReport report{id};
    const auto record = [](AxiomOutcome& o, std::size_t i, std::size_t j, std::size_t k, double v) {
        if (!o.holds) return;
        o.holds = false;
        o.i = i, o.j = j, o.k = k, o.value = v;
    };

    for (std::size_t i = 0; i < m; ++i)
        if (std::fabs(at(i, i)) > tolerance) record(report.identity, i, i, i, at(i, i));

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double gap = std::fabs(at(i, j) - at(j, i));
            if (gap > tolerance) record(report.symmetry, i, j, i, gap);
        }

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (at(i, j) < -tolerance) record(report.non_negativity, i, j, i, at(i, j));

    for (std::size_t i = 0; i < m && report.triangle.holds; ++i)
        for (std::size_t j = 0; j < m && report.triangle.holds; ++j)
            for (std::size_t k = 0; k < m; ++k) {
                const double excess = at(i, j) - (at(i, k) + at(k, j));
                if (excess > tolerance) {
                    record(report.triangle, i, j, k, excess);
                    break;
                }
            }
    return report;
}

std::string registry_csv() {
    std::ostringstream out;
    out << "code,name,taxonomy,requires_nonnegative_input,satisfies_identity,symmetric\n";
    for (const auto& e : kRegistry) {
        out << e.code << ',' << e.name << ',' << to_string(e.taxonomy) << ','
            << (e.requires_nonnegative_input ? 1 : 0) << ',' << (e.satisfies_identity ? 1 : 0) << ','
            << (e.symmetric ? 1 : 0) << '\n';
    }
    return out.str();
}

} // namespace opfdist
