#include "annulus/circle_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "annulus/errors.hpp"

namespace annulus {

namespace {

constexpr double kBaseLength = 1.0 / 3.0;  // c, total inserted length 1/2

double frac(double x) { return x - std::floor(x); }

long double frac_ld(long double x) { return x - std::floor(x); }

}  // namespace

double inserted_length(std::int64_t i) {
    const double a = static_cast<double>(i < 0 ? -i : i);
    return kBaseLength / ((a + 1.0) * (a + 2.0));
}

std::optional<Fraction> rational_approximation(double x, std::int64_t max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    long double r = x;
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(r));
    std::int64_t k_prev = 0, k = 1;
    r -= std::floor(r);
    for (int step = 0; step < 64; ++step) {
        if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
            return Fraction{h, k};
        }
        if (r == 0.0L) break;
        r = 1.0L / r;
        const auto a = static_cast<std::int64_t>(std::floor(r));
        r -= std::floor(r);
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        if (k_next > max_den || k_next <= 0) break;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    return std::nullopt;
}

// Sorted rotation orbit {frac(i*alpha) : |i| <= N} with prefix sums of the
// inserted lengths for the domain index set [-N, N-1] and the image index set
// [-N+1, N].
class DenjoyTable {
public:
    DenjoyTable(double alpha, std::int64_t n) : alpha_(alpha), n_(n) {
        const std::size_t m = static_cast<std::size_t>(2 * n + 1);
        base_.resize(m);
        index_.resize(m);
        const long double a = alpha;
        std::vector<long double> exact(m);
        for (std::int64_t i = -n; i <= n; ++i) {
            exact[static_cast<std::size_t>(i + n)] = frac_ld(static_cast<long double>(i) * a);
        }
        std::vector<std::int32_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::int32_t l, std::int32_t r) { return exact[l] < exact[r]; });
        rank_.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            base_[k] = static_cast<double>(exact[order[k]]);
            index_[k] = static_cast<std::int32_t>(order[k] - n);
            rank_[order[k]] = static_cast<std::int32_t>(k);
        }
        // Compensated long double prefix sums over ~10^6 lengths.
        pre_dom_.assign(m + 1, 0.0);
        pre_tgt_.assign(m + 1, 0.0);
        long double dom = 0.0L, tgt = 0.0L, dom_c = 0.0L, tgt_c = 0.0L;
        auto add = [](long double& sum, long double& comp, long double v) {
            const long double y = v - comp;
            const long double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        };
        for (std::size_t k = 0; k < m; ++k) {
            const std::int64_t i = index_[k];
            const long double l = inserted_length(i);
            if (in_dom(i)) add(dom, dom_c, l);
            if (in_tgt(i)) add(tgt, tgt_c, l);
            pre_dom_[k + 1] = static_cast<double>(dom);
            pre_tgt_[k + 1] = static_cast<double>(tgt);
        }
        slope_ = 1.0 - pre_dom_[m];

        // Endpoints of the orbit that fall outside [-N, N].
        const long double c_after = frac_ld(static_cast<long double>(n + 1) * a);
        const long double c_before = frac_ld(static_cast<long double>(-n - 1) * a);
        c_after_ = static_cast<double>(c_after);
        c_before_ = static_cast<double>(c_before);
        pos_after_tgt_ = slope_ * c_after_ + pre_tgt_[count_below(c_after_)];
        pos_before_dom_ = slope_ * c_before_ + pre_dom_[count_below(c_before_)];
        wrap_last_ = std::llround(static_cast<double>(exact[m - 1] + a - c_after));
        wrap_before_ = std::llround(static_cast<double>(c_before + a - exact[0]));
    }

    std::int64_t truncation() const { return n_; }
    double slope() const { return slope_; }

    bool in_dom(std::int64_t i) const { return i >= -n_ && i <= n_ - 1; }
    bool in_tgt(std::int64_t i) const { return i >= -n_ + 1 && i <= n_; }

    double base_of(std::int64_t i) const { return base_[pos(i)]; }

    // Left endpoint of orbit entry i in domain / image coordinates.
    double dom_left(std::int64_t i) const {
        const std::size_t k = pos(i);
        return slope_ * base_[k] + pre_dom_[k];
    }
    double tgt_left(std::int64_t i) const {
        const std::size_t k = pos(i);
        return slope_ * base_[k] + pre_tgt_[k];
    }

    // Integer m with c_i + alpha - m == c_{i+1}.
    std::int64_t wrap(std::int64_t i) const {
        if (i == n_) return wrap_last_;
        return std::llround(base_[pos(i)] + alpha_ - base_[pos(i + 1)]);
    }

    struct Location {
        bool inside = false;      // inside an inserted interval
        std::int64_t entry = 0;   // orbit index of the interval, or of the entry left of the gap
        double offset = 0.0;      // inside: fraction in [0,1]; gap: distance past the entry
    };

    // y in [0,1) (or slightly above after the wrap shift).
    Location locate(double y, bool image_side) const {
        const auto& pre = image_side ? pre_tgt_ : pre_dom_;
        const std::size_t m = base_.size();
        // Largest k with left(k) <= y.
        std::size_t lo = 0, hi = m;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (slope_ * base_[mid] + pre[mid] <= y) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (lo == 0) {
            // Before the first entry: this is the gap after the last entry, one turn back.
            return locate_gap(m - 1, y + 1.0, image_side);
        }
        const std::size_t k = lo - 1;
        const std::int64_t i = index_[k];
        const bool present = image_side ? in_tgt(i) : in_dom(i);
        const double left = slope_ * base_[k] + pre[k];
        if (present) {
            const double l = inserted_length(i);
            if (y <= left + l) {
                return Location{true, i, std::clamp((y - left) / l, 0.0, 1.0)};
            }
        }
        return locate_gap(k, y, image_side);
    }

    double eval(double x) const {
        const double n = std::floor(x);
        const double y = x - n;
        double shift = n;
        const Location loc = locate(y, false);
        if (loc.inside) {
            const std::int64_t i = loc.entry;
            const std::int64_t j = i + 1;
            return shift + static_cast<double>(wrap(i)) + tgt_left(j) + loc.offset * inserted_length(j);
        }
        // Gap: rigid translation from the right end of entry i to the right end of entry i+1.
        const std::int64_t i = loc.entry;
        shift += loc_shift(y, i, false);
        return shift + static_cast<double>(wrap(i)) + tgt_right(i + 1) + loc.offset;
    }

    double inverse(double z) const {
        const double n = std::floor(z);
        const double y = z - n;
        double shift = n;
        const Location loc = locate(y, true);
        if (loc.inside) {
            const std::int64_t j = loc.entry;
            const std::int64_t i = j - 1;
            return shift - static_cast<double>(wrap(i)) + dom_left(i) + loc.offset * inserted_length(i);
        }
        const std::int64_t j = loc.entry;
        shift += loc_shift(y, j, true);
        const std::int64_t i = j - 1;
        return shift - static_cast<double>(wrap_prev(j)) + dom_right(i) + loc.offset;
    }

    double collapse(double x) const {
        const double n = std::floor(x);
        const double y = x - n;
        const Location loc = locate(y, false);
        if (loc.inside) return n + base_of(loc.entry);
        const double shift = loc_shift(y, loc.entry, false);
        return n + shift + base_of(loc.entry) + loc.offset / slope_;
    }

    std::optional<std::int64_t> interval_of(double theta) const {
        const Location loc = locate(theta - std::floor(theta), false);
        if (!loc.inside) return std::nullopt;
        return loc.entry;
    }

    double fraction_in(double theta) const {
        return locate(theta - std::floor(theta), false).offset;
    }

    double total_inserted() const { return pre_dom_.back(); }

private:
    std::size_t pos(std::int64_t i) const {
        if (i < -n_ || i > n_) throw std::out_of_range("Denjoy orbit index outside truncation");
        return static_cast<std::size_t>(rank_[static_cast<std::size_t>(i + n_)]);
    }

    std::size_t count_below(double u) const {
        return static_cast<std::size_t>(std::lower_bound(base_.begin(), base_.end(), u) - base_.begin());
    }

    Location locate_gap(std::size_t k, double y, bool image_side) const {
        const auto& pre = image_side ? pre_tgt_ : pre_dom_;
        const std::int64_t i = index_[k];
        const bool present = image_side ? in_tgt(i) : in_dom(i);
        const double right = slope_ * base_[k] + pre[k] + (present ? inserted_length(i) : 0.0);
        return Location{false, i, std::max(0.0, y - right)};
    }

    // -1 when y sits before the first entry (gap belongs to the previous turn).
    double loc_shift(double y, std::int64_t entry, bool image_side) const {
        const std::size_t k = pos(entry);
        const auto& pre = image_side ? pre_tgt_ : pre_dom_;
        return (slope_ * base_[k] + pre[k] > y) ? -1.0 : 0.0;
    }

    double tgt_right(std::int64_t j) const {
        if (j == n_ + 1) return pos_after_tgt_;
        return tgt_left(j) + (in_tgt(j) ? inserted_length(j) : 0.0);
    }

    double dom_right(std::int64_t i) const {
        if (i == -n_ - 1) return pos_before_dom_;
        return dom_left(i) + (in_dom(i) ? inserted_length(i) : 0.0);
    }

    // Integer m with c_{j-1} + alpha - m == c_j.
    std::int64_t wrap_prev(std::int64_t j) const {
        if (j == -n_) return wrap_before_;
        return wrap(j - 1);
    }

    double alpha_;
    std::int64_t n_;
    double slope_ = 1.0;
    std::vector<double> base_;
    std::vector<std::int32_t> index_;
    std::vector<std::int32_t> rank_;
    std::vector<double> pre_dom_;
    std::vector<double> pre_tgt_;
    double c_after_ = 0.0, c_before_ = 0.0;
    double pos_after_tgt_ = 0.0, pos_before_dom_ = 0.0;
    std::int64_t wrap_last_ = 0, wrap_before_ = 0;
};

CircleLift CircleLift::rigid(double alpha) {
    if (!std::isfinite(alpha)) throw ConfigError("rotation number must be finite");
    CircleLift f;
    f.kind_ = LiftKind::rigid;
    f.alpha_ = alpha;
    f.rational_ = rational_approximation(alpha);
    return f;
}

CircleLift CircleLift::denjoy(double alpha, double tol) {
    if (!std::isfinite(alpha)) throw ConfigError("rotation number must be finite");
    if (!(tol >= 1e-7 && tol < 1.0)) {
        throw ConfigError("Denjoy truncation tolerance must lie in [1e-7, 1)");
    }
    if (const auto r = rational_approximation(alpha)) {
        throw NearRational("alpha = " + std::to_string(alpha) + " is the rational " +
                           std::to_string(r->p) + "/" + std::to_string(r->q) +
                           " at machine precision");
    }
    // Tail sum_{|i|>N} l_i = 2c/(N+2) <= tol.
    const auto n = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(2.0 * kBaseLength / tol - 2.0)));
    CircleLift f;
    f.kind_ = LiftKind::denjoy;
    f.alpha_ = alpha;
    f.tol_ = tol;
    f.table_ = std::make_shared<const DenjoyTable>(alpha, n);
    return f;
}

double CircleLift::eval(double x) const {
    if (kind_ == LiftKind::rigid) return x + alpha_;
    return table_->eval(x);
}

double CircleLift::inverse(double y) const {
    if (kind_ == LiftKind::rigid) return y - alpha_;
    return table_->inverse(y);
}

double CircleLift::g_alpha(double theta) const {
    if (kind_ == LiftKind::rigid) {
        if (!rational_) {
            throw ConfigError("g_alpha needs a rational rotation number for a rigid lift");
        }
        const double s = std::sin(M_PI * static_cast<double>(rational_->q) * frac(theta));
        return 0.5 * s * s;
    }
    const auto i = table_->interval_of(theta);
    if (!i) return 0.0;
    const double r = table_->fraction_in(theta);
    const double hat = std::min(r, 1.0 - r);
    const double scale = std::max<double>(1.0, static_cast<double>(*i < 0 ? -*i : *i));
    return hat / scale;
}

std::int64_t CircleLift::truncation() const {
    if (!table_) throw std::logic_error("rigid lift has no inserted intervals");
    return table_->truncation();
}

std::optional<std::int64_t> CircleLift::interval_index(double theta) const {
    if (!table_) throw std::logic_error("rigid lift has no inserted intervals");
    return table_->interval_of(theta);
}

InsertedInterval CircleLift::interval(std::int64_t i) const {
    if (!table_) throw std::logic_error("rigid lift has no inserted intervals");
    if (!table_->in_dom(i)) throw std::out_of_range("inserted interval index outside truncation");
    return InsertedInterval{i, table_->base_of(i), table_->dom_left(i), inserted_length(i)};
}

double CircleLift::collapse(double x) const {
    if (!table_) return x;
    return table_->collapse(x);
}

double CircleLift::minimal_set_measure() const {
    if (!table_) return 0.0;
    return 1.0 - table_->total_inserted();
}

CircleLift make_rigid_rotation(double alpha) { return CircleLift::rigid(alpha); }

CircleLift make_denjoy(double alpha, double tol) { return CircleLift::denjoy(alpha, tol); }

double rotation_number_estimate(const CircleLift& f, double x0, std::int64_t n) {
    if (n < 1) throw ConfigError("rotation_number_estimate needs n >= 1");
    double x = x0;
    for (std::int64_t k = 0; k < n; ++k) x = f.eval(x);
    return (x - x0) / static_cast<double>(n);
}

}  // namespace annulus
