#include "teg/materials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "teg/errors.hpp"

namespace teg {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string describe(double T) {
    std::ostringstream os;
    os.precision(17);
    os << T;
    return os.str();
}

void require_finite(std::initializer_list<double> values, std::string_view what) {
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidModel(std::string(what) + ": non-finite parameter");
}

}  // namespace

PropertyModel PropertyModel::constant(double c) {
    require_finite({c}, "constant");
    return PropertyModel(family::Constant{c});
}
PropertyModel PropertyModel::linear(double a, double b) {
    require_finite({a, b}, "linear");
    return PropertyModel(family::Linear{a, b});
}
PropertyModel PropertyModel::reciprocal(double c) {
    require_finite({c}, "reciprocal");
    return PropertyModel(family::Reciprocal{c});
}
PropertyModel PropertyModel::log_affine(double c0, double c1, double T_ref) {
    require_finite({c0, c1, T_ref}, "log_affine");
    if (!(T_ref > 0)) throw InvalidModel("log_affine: T_ref must be positive");
    return PropertyModel(family::LogAffine{c0, c1, T_ref});
}
PropertyModel PropertyModel::clamped_linear(double M, double T_pivot, double v_pivot) {
    require_finite({M, T_pivot, v_pivot}, "clamped_linear");
    return PropertyModel(family::ClampedLinear{M, T_pivot, v_pivot});
}
PropertyModel PropertyModel::wiedemann_franz(double Lo, PropertyModel partner) {
    require_finite({Lo}, "wiedemann_franz");
    return PropertyModel(
        family::WiedemannFranz{Lo, std::make_shared<const PropertyModel>(std::move(partner))});
}
PropertyModel PropertyModel::clamped_transform_linear(double M, double T_pivot, double v_pivot,
                                                      PropertyModel kappa) {
    require_finite({M, T_pivot, v_pivot}, "clamped_transform_linear");
    return PropertyModel(family::ClampedTransformLinear{
        M, T_pivot, v_pivot, std::make_shared<const PropertyModel>(std::move(kappa))});
}
PropertyModel PropertyModel::table(std::vector<family::Knot> knots) {
    if (knots.empty()) throw InvalidModel("table: at least one knot required");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        require_finite({knots[i].T, knots[i].value}, "table");
        if (!(knots[i].value > 0)) throw InvalidModel("table: knot values must be positive");
        if (i > 0 && !(knots[i].T > knots[i - 1].T))
            throw InvalidModel("table: knots must be strictly increasing in T");
    }
    return PropertyModel(family::Table{std::move(knots)});
}

double PropertyModel::value_unchecked(double T) const {
    return std::visit(
        Overloaded{
            [](const family::Constant& f) { return f.c; },
            [T](const family::Linear& f) { return f.a * T + f.b; },
            [T](const family::Reciprocal& f) { return f.c / T; },
            [T](const family::LogAffine& f) { return f.c0 * (1.0 + f.c1 * std::log(T / f.T_ref)); },
            [T](const family::ClampedLinear& f) {
                return T < f.T_pivot ? f.v_pivot : f.M * (T - f.T_pivot) + f.v_pivot;
            },
            [T](const family::WiedemannFranz& f) {
                return f.Lo * T / f.partner->value_unchecked(T);
            },
            [T](const family::ClampedTransformLinear& f) {
                return T < f.T_pivot ? f.v_pivot
                                     : f.M * f.kappa->integral(f.T_pivot, T) + f.v_pivot;
            },
            [T](const family::Table& f) {
                const auto& k = f.knots;
                if (T <= k.front().T) return k.front().value;
                if (T >= k.back().T) return k.back().value;
                auto hi = std::upper_bound(k.begin(), k.end(), T,
                                           [](double t, const family::Knot& kn) { return t < kn.T; });
                auto lo = hi - 1;
                const double w = (T - lo->T) / (hi->T - lo->T);
                return lo->value + w * (hi->value - lo->value);
            },
        },
        family_);
}

double PropertyModel::domain_low() const {
    return std::visit(
        Overloaded{
            [](const family::WiedemannFranz& f) { return std::max(0.0, f.partner->domain_low()); },
            [](const family::ClampedTransformLinear& f) { return f.kappa->domain_low(); },
            [](const family::Table& f) { return f.knots.front().T; },
            [](const auto&) { return 0.0; },
        },
        family_);
}

bool PropertyModel::domain_inclusive() const {
    return std::holds_alternative<family::Table>(family_);
}

double PropertyModel::operator()(double T) const {
    const double lo = domain_low();
    if (std::isnan(T) || T < lo || (T == lo && !domain_inclusive()))
        throw DomainError(std::string(family_name()) + ": T = " + describe(T) +
                          " is below the domain bound " + describe(lo));
    const double v = value_unchecked(T);
    if (!(v > 0) || !std::isfinite(v))
        throw NonPositiveValue(std::string(family_name()) + ": value " + describe(v) +
                               " at T = " + describe(T));
    return v;
}

std::optional<double> PropertyModel::exact_integral(double a, double b) const {
    if (a > b) {
        auto flipped = exact_integral(b, a);
        if (flipped) *flipped = -*flipped;
        return flipped;
    }
    return std::visit(
        Overloaded{
            [=](const family::Constant& f) -> std::optional<double> { return f.c * (b - a); },
            [=](const family::Linear& f) -> std::optional<double> {
                return 0.5 * f.a * (b - a) * (b + a) + f.b * (b - a);
            },
            [=](const family::Reciprocal& f) -> std::optional<double> {
                return f.c * std::log(b / a);
            },
            [=](const family::LogAffine& f) -> std::optional<double> {
                auto F = [&](double T) {
                    return T + f.c1 * (T * std::log(T / f.T_ref) - T);
                };
                return f.c0 * (F(b) - F(a));
            },
            [=](const family::ClampedLinear& f) -> std::optional<double> {
                auto F = [&](double T) {
                    const double above = std::max(T - f.T_pivot, 0.0);
                    return f.v_pivot * T + 0.5 * f.M * above * above;
                };
                return F(b) - F(a);
            },
            [=](const family::WiedemannFranz& f) -> std::optional<double> {
                const auto& p = f.partner->family();
                if (auto c = std::get_if<family::Constant>(&p))
                    return f.Lo / c->c * 0.5 * (b - a) * (b + a);
                if (auto r = std::get_if<family::Reciprocal>(&p))
                    return f.Lo / (3.0 * r->c) * (b * b * b - a * a * a);
                if (auto l = std::get_if<family::Linear>(&p); l && l->a != 0.0) {
                    auto F = [&](double T) {
                        return (T - l->b / l->a * std::log(l->a * T + l->b)) / l->a;
                    };
                    return f.Lo * (F(b) - F(a));
                }
                return std::nullopt;
            },
            [=](const family::ClampedTransformLinear& f) -> std::optional<double> {
                auto c = std::get_if<family::Constant>(&f.kappa->family());
                if (!c) return std::nullopt;
                auto F = [&](double T) {
                    const double above = std::max(T - f.T_pivot, 0.0);
                    return f.v_pivot * T + 0.5 * f.M * c->c * above * above;
                };
                return F(b) - F(a);
            },
            [&](const family::Table& f) -> std::optional<double> {
                // Piecewise-linear pieces integrate exactly with the trapezoid rule.
                std::vector<double> xs{a};
                for (const auto& k : f.knots)
                    if (k.T > a && k.T < b) xs.push_back(k.T);
                xs.push_back(b);
                double sum = 0.0;
                for (std::size_t i = 0; i + 1 < xs.size(); ++i)
                    sum += 0.5 * (xs[i + 1] - xs[i]) *
                           (value_unchecked(xs[i]) + value_unchecked(xs[i + 1]));
                return sum;
            },
        },
        family_);
}

double PropertyModel::integral(double a, double b, const QuadratureOptions& opts) const {
    if (a == b) return 0.0;
    if (auto exact = exact_integral(a, b)) return *exact;
    const auto cuts = breakpoints();
    return teg::integrate([this](double T) { return value_unchecked(T); }, a, b, cuts, opts).value;
}

std::vector<double> PropertyModel::breakpoints() const {
    return std::visit(
        Overloaded{
            [](const family::ClampedLinear& f) { return std::vector<double>{f.T_pivot}; },
            [](const family::ClampedTransformLinear& f) {
                auto out = f.kappa->breakpoints();
                out.push_back(f.T_pivot);
                return out;
            },
            [](const family::WiedemannFranz& f) { return f.partner->breakpoints(); },
            [](const family::Table& f) {
                std::vector<double> out;
                for (const auto& k : f.knots) out.push_back(k.T);
                return out;
            },
            [](const auto&) { return std::vector<double>{}; },
        },
        family_);
}

double PropertyModel::asymptotic_power() const {
    return std::visit(
        Overloaded{
            [](const family::Linear& f) { return f.a > 0 ? 1.0 : 0.0; },
            [](const family::Reciprocal&) { return -1.0; },
            [](const family::ClampedLinear& f) { return f.M > 0 ? 1.0 : 0.0; },
            [](const family::WiedemannFranz& f) { return 1.0 - f.partner->asymptotic_power(); },
            [](const family::ClampedTransformLinear& f) {
                return f.M > 0 ? std::max(0.0, 1.0 + f.kappa->asymptotic_power()) : 0.0;
            },
            [](const auto&) { return 0.0; },
        },
        family_);
}

bool PropertyModel::smooth() const {
    return std::visit(
        Overloaded{
            [](const family::ClampedLinear&) { return false; },
            [](const family::ClampedTransformLinear&) { return false; },
            [](const family::Table& f) { return f.knots.size() == 1; },
            [](const family::WiedemannFranz& f) { return f.partner->smooth(); },
            [](const auto&) { return true; },
        },
        family_);
}

void PropertyModel::validate(double T_lo) const {
    const std::string name(family_name());
    const double lo = domain_low();
    if (!(T_lo > lo || (T_lo == lo && domain_inclusive())))
        throw InvalidModel(name + ": T = " + describe(T_lo) + " lies outside the model domain");
    auto fail = [&](const std::string& why) { throw InvalidModel(name + ": " + why); };
    std::visit(
        Overloaded{
            [&](const family::Constant& f) {
                if (!(f.c > 0)) fail("c must be positive");
            },
            [&](const family::Linear& f) {
                if (f.a < 0) fail("slope must be nonnegative to stay positive on [T, inf)");
                if (!(f.a * T_lo + f.b > 0)) fail("value at the lower temperature is not positive");
            },
            [&](const family::Reciprocal& f) {
                if (!(f.c > 0)) fail("c must be positive");
            },
            [&](const family::LogAffine& f) {
                if (!(f.c0 > 0)) fail("c0 must be positive");
                if (f.c1 < 0) fail("c1 must be nonnegative to stay positive on [T, inf)");
                if (!(value_unchecked(T_lo) > 0)) fail("value at the lower temperature is not positive");
            },
            [&](const family::ClampedLinear& f) {
                if (f.M < 0) fail("M must be nonnegative");
                if (!(f.v_pivot > 0)) fail("v_pivot must be positive");
            },
            [&](const family::WiedemannFranz& f) {
                if (!(f.Lo > 0)) fail("Lo must be positive");
                f.partner->validate(T_lo);
            },
            [&](const family::ClampedTransformLinear& f) {
                if (f.M < 0) fail("M must be nonnegative");
                if (!(f.v_pivot > 0)) fail("v_pivot must be positive");
                f.kappa->validate(std::min(T_lo, f.T_pivot));
            },
            [&](const family::Table&) {},
        },
        family_);
}

std::string_view PropertyModel::family_name() const {
    return std::visit(
        Overloaded{
            [](const family::Constant&) { return std::string_view("constant"); },
            [](const family::Linear&) { return std::string_view("linear"); },
            [](const family::Reciprocal&) { return std::string_view("reciprocal"); },
            [](const family::LogAffine&) { return std::string_view("log_affine"); },
            [](const family::ClampedLinear&) { return std::string_view("clamped_linear"); },
            [](const family::WiedemannFranz&) { return std::string_view("wiedemann_franz"); },
            [](const family::ClampedTransformLinear&) {
                return std::string_view("clamped_transform_linear");
            },
            [](const family::Table&) { return std::string_view("table"); },
        },
        family_);
}

bool operator==(const PropertyModel& a, const PropertyModel& b) {
    if (a.family_.index() != b.family_.index()) return false;
    return std::visit(
        [&](const auto& fa) {
            using F = std::decay_t<decltype(fa)>;
            const auto& fb = std::get<F>(b.family_);
            if constexpr (std::is_same_v<F, family::Constant> || std::is_same_v<F, family::Reciprocal>)
                return fa.c == fb.c;
            else if constexpr (std::is_same_v<F, family::Linear>)
                return fa.a == fb.a && fa.b == fb.b;
            else if constexpr (std::is_same_v<F, family::LogAffine>)
                return fa.c0 == fb.c0 && fa.c1 == fb.c1 && fa.T_ref == fb.T_ref;
            else if constexpr (std::is_same_v<F, family::ClampedLinear>)
                return fa.M == fb.M && fa.T_pivot == fb.T_pivot && fa.v_pivot == fb.v_pivot;
            else if constexpr (std::is_same_v<F, family::WiedemannFranz>)
                return fa.Lo == fb.Lo && *fa.partner == *fb.partner;
            else if constexpr (std::is_same_v<F, family::ClampedTransformLinear>)
                return fa.M == fb.M && fa.T_pivot == fb.T_pivot && fa.v_pivot == fb.v_pivot &&
                       *fa.kappa == *fb.kappa;
            else
                return std::equal(fa.knots.begin(), fa.knots.end(), fb.knots.begin(),
                                  fb.knots.end(), [](const auto& x, const auto& y) {
                                      return x.T == y.T && x.value == y.value;
                                  });
        },
        a.family_);
}

void MaterialPair::validate(double T_c) const {
    if (!std::isfinite(alpha0)) throw InvalidModel("alpha0 must be finite");
    kappa.validate(T_c);
    rho.validate(T_c);
    if (kappa.asymptotic_power() + rho.asymptotic_power() < -1.0)
        throw InvalidModel("rho*kappa is integrable on [T_c, inf); the solver needs it to diverge");
}

KTransform::KTransform(PropertyModel kappa, double T_c)
    : kappa_(std::move(kappa)), T_c_(T_c), k_inf_(std::numeric_limits<double>::infinity()) {
    kappa_.validate(T_c_);
    if (kappa_.asymptotic_power() < -1.0)
        throw InvalidModel("kappa with a finite K_inf is not supported by the built-in families");
}

double KTransform::forward(double T) const {
    if (std::isnan(T) || T < T_c_)
        throw DomainError("K(T) requested below T_c: T = " + describe(T));
    return T_c_ + kappa_.integral(T_c_, T);
}

double KTransform::inverse(double u) const {
    if (std::isnan(u) || u < T_c_ || u >= k_inf_)
        throw RangeError("K^-1(u) requested outside [T_c, K_inf): u = " + describe(u));
    if (u == T_c_) return T_c_;
    const double tol = std::max(tol_inverse, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(u));

    double lo = T_c_;
    double step = (u - T_c_) / kappa_.value_unchecked(T_c_);
    double hi = T_c_ + step;
    while (forward(hi) < u) {
        lo = hi;
        step *= 2.0;
        hi = T_c_ + step;
        if (!std::isfinite(hi)) throw RangeError("K^-1 bracket search diverged");
    }

    double T = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = forward(T) - u;
        if (std::abs(f) <= tol) return T;
        if (f < 0)
            lo = T;
        else
            hi = T;
        double next = T - f / kappa_.value_unchecked(T);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == T || hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) return T;
        T = next;
    }
    return T;
}

double eval_property(const PropertyModel& model, double T) { return model(T); }
double k_forward(const KTransform& kt, double T) { return kt.forward(T); }
double k_inverse(const KTransform& kt, double u) { return kt.inverse(u); }

std::optional<double> rho_kappa_integral_exact(const MaterialPair& pair, double lo, double hi) {
    const auto& k = pair.kappa.family();
    const auto& r = pair.rho.family();

    if (auto c = std::get_if<family::Constant>(&k))
        if (auto v = pair.rho.exact_integral(lo, hi)) return c->c * *v;
    if (auto c = std::get_if<family::Constant>(&r))
        if (auto v = pair.kappa.exact_integral(lo, hi)) return c->c * *v;

    // rho*kappa == Lo*T when one side is Wiedemann-Franz against the other.
    if (auto wf = std::get_if<family::WiedemannFranz>(&k); wf && *wf->partner == pair.rho)
        return 0.5 * wf->Lo * (hi - lo) * (hi + lo);
    if (auto wf = std::get_if<family::WiedemannFranz>(&r); wf && *wf->partner == pair.kappa)
        return 0.5 * wf->Lo * (hi - lo) * (hi + lo);

    auto recip_times = [&](const family::Reciprocal& rc,
                           const PropertyModel::Family& other) -> std::optional<double> {
        if (auto l = std::get_if<family::Linear>(&other))
            return rc.c * (l->a * (hi - lo) + l->b * std::log(hi / lo));
        if (auto la = std::get_if<family::LogAffine>(&other)) {
            const double sh = std::log(hi / la->T_ref);
            const double sl = std::log(lo / la->T_ref);
            return rc.c * la->c0 * ((sh - sl) + 0.5 * la->c1 * (sh * sh - sl * sl));
        }
        if (auto r2 = std::get_if<family::Reciprocal>(&other))
            return rc.c * r2->c * (1.0 / lo - 1.0 / hi);
        return std::nullopt;
    };
    if (auto rc = std::get_if<family::Reciprocal>(&k))
        if (auto v = recip_times(*rc, r)) return v;
    if (auto rc = std::get_if<family::Reciprocal>(&r))
        if (auto v = recip_times(*rc, k)) return v;

    auto l1 = std::get_if<family::Linear>(&k);
    auto l2 = std::get_if<family::Linear>(&r);
    if (l1 && l2) {
        auto F = [&](double T) {
            return l1->a * l2->a * T * T * T / 3.0 + 0.5 * (l1->a * l2->b + l1->b * l2->a) * T * T +
                   l1->b * l2->b * T;
        };
        return F(hi) - F(lo);
    }
    return std::nullopt;
}

double rho_kappa_integral(const MaterialPair& pair, double T_lo, double T_hi,
                          const QuadratureOptions& opts) {
    if (std::isnan(T_lo) || std::isnan(T_hi) || T_lo > T_hi)
        throw DomainError("rho_kappa_integral: need T_lo <= T_hi");
    for (const PropertyModel* m : {&pair.kappa, &pair.rho}) {
        const double low = m->domain_low();
        if (T_lo < low || (T_lo == low && !m->domain_inclusive()))
            throw DomainError("rho_kappa_integral: T_lo = " + describe(T_lo) +
                              " is outside the domain of " + std::string(m->family_name()));
    }
    if (T_lo == T_hi) return 0.0;
    if (auto exact = rho_kappa_integral_exact(pair, T_lo, T_hi)) return *exact;

    auto cuts = pair.kappa.breakpoints();
    const auto more = pair.rho.breakpoints();
    cuts.insert(cuts.end(), more.begin(), more.end());
    return teg::integrate(
               [&](double T) { return pair.rho.value_unchecked(T) * pair.kappa.value_unchecked(T); },
               T_lo, T_hi, cuts, opts)
        .value;
}

}  // namespace teg
