#pragma once

#include "monogap/rational.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace monogap {

/// One-sided-closed real interval with rational finite endpoints. Exactly four
/// shapes exist: [lo,hi), (lo,hi], [lo,+inf), (-inf,hi]. Every interval here
/// contains exactly one of its endpoints, so the four shapes split into two
/// families by which side is closed.
class Interval {
public:
    enum class Kind { ClosedOpen, OpenClosed, ClosedUnbounded, UnboundedClosed };

    static Interval closed_open(Rational lo, Rational hi) {
        require(lo < hi, "closed_open: need lo < hi");
        return Interval(Kind::ClosedOpen, std::move(lo), std::move(hi));
    }
    static Interval open_closed(Rational lo, Rational hi) {
        require(lo < hi, "open_closed: need lo < hi");
        return Interval(Kind::OpenClosed, std::move(lo), std::move(hi));
    }
    static Interval closed_unbounded(Rational lo) {
        return Interval(Kind::ClosedUnbounded, std::move(lo), Rational());
    }
    static Interval unbounded_closed(Rational hi) {
        return Interval(Kind::UnboundedClosed, Rational(), std::move(hi));
    }

    Kind kind() const { return kind_; }
    bool bounded_below() const { return kind_ != Kind::UnboundedClosed; }
    bool bounded_above() const { return kind_ != Kind::ClosedUnbounded; }
    bool bounded() const { return bounded_below() && bounded_above(); }
    /// True for [lo,hi) and [lo,+inf); false for the right-closed shapes.
    bool left_closed() const { return kind_ == Kind::ClosedOpen || kind_ == Kind::ClosedUnbounded; }

    const Rational& lo() const {
        if (!bounded_below()) throw std::domain_error("Interval::lo: unbounded below");
        return lo_;
    }
    const Rational& hi() const {
        if (!bounded_above()) throw std::domain_error("Interval::hi: unbounded above");
        return hi_;
    }
    /// The unique endpoint the interval contains.
    const Rational& closed_endpoint() const { return left_closed() ? lo() : hi(); }

    bool contains(const Rational& t) const {
        switch (kind_) {
            case Kind::ClosedOpen: return lo_ <= t && t < hi_;
            case Kind::OpenClosed: return lo_ < t && t <= hi_;
            case Kind::ClosedUnbounded: return lo_ <= t;
            case Kind::UnboundedClosed: return t <= hi_;
        }
        return false;
    }

    bool contains_double(double t, double tol) const {
        double a = bounded_below() ? lo_.to_double() : -std::numeric_limits<double>::infinity();
        double b = bounded_above() ? hi_.to_double() : std::numeric_limits<double>::infinity();
        return t >= a - tol && t <= b + tol;
    }

    /// `count` distinct rational points inside the interval. The first is the
    /// closed endpoint so that endpoint behaviour always gets exercised.
    std::vector<Rational> probe_points(int count) const {
        std::vector<Rational> pts;
        if (count <= 0) return pts;
        pts.push_back(closed_endpoint());
        for (long long k = 1; static_cast<int>(pts.size()) < count; ++k) {
            switch (kind_) {
                case Kind::ClosedOpen:
                case Kind::OpenClosed:
                    pts.push_back(lo_ + (hi_ - lo_) * Rational(k, k + 1));
                    break;
                case Kind::ClosedUnbounded:
                    pts.push_back(lo_ + Rational(k, 2));
                    break;
                case Kind::UnboundedClosed:
                    pts.push_back(hi_ - Rational(k, 2));
                    break;
            }
        }
        return pts;
    }

    /// "[0,1)", "(-inf,3]", ...
    std::string str() const {
        std::string a = bounded_below() ? lo_.str() : "-inf";
        std::string b = bounded_above() ? hi_.str() : "inf";
        return (left_closed() ? "[" : "(") + a + "," + b + (bounded_above() && !left_closed() ? "]" : ")");
    }

    /// Parses the str() forms: brackets mandatory, "inf"/"-inf" for the
    /// unbounded sides, rational endpoints as "a" or "a/b".
    static std::optional<Interval> parse(std::string_view s);

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.kind_ == b.kind_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    Interval(Kind k, Rational lo, Rational hi) : kind_(k), lo_(std::move(lo)), hi_(std::move(hi)) {}
    static void require(bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(std::string("Interval::") + msg);
    }

    Kind kind_;
    Rational lo_, hi_;  // unused side is 0
};

inline std::optional<Interval> Interval::parse(std::string_view s) {
    auto strip = [](std::string_view t) {
        while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
        while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
        return t;
    };
    s = strip(s);
    if (s.size() < 5) return std::nullopt;
    char open = s.front(), close = s.back();
    if ((open != '[' && open != '(') || (close != ')' && close != ']')) return std::nullopt;
    std::string_view body = s.substr(1, s.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    std::string_view ls = strip(body.substr(0, comma));
    std::string_view rs = strip(body.substr(comma + 1));
    bool linf = (ls == "-inf");
    bool rinf = (rs == "inf" || rs == "+inf");
    std::optional<Rational> lv = linf ? std::nullopt : Rational::parse(ls);
    std::optional<Rational> rv = rinf ? std::nullopt : Rational::parse(rs);
    if ((!linf && !lv) || (!rinf && !rv)) return std::nullopt;
    if (open == '[' && close == ')' && !linf && rinf) return closed_unbounded(*lv);
    if (open == '(' && close == ']' && linf && !rinf) return unbounded_closed(*rv);
    if (linf || rinf) return std::nullopt;
    if (!(*lv < *rv)) return std::nullopt;
    if (open == '[' && close == ')') return closed_open(*lv, *rv);
    if (open == '(' && close == ']') return open_closed(*lv, *rv);
    return std::nullopt;
}

}  // namespace monogap
