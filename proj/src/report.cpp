#include "syzlab/report.hpp"

#include "syzlab/error.hpp"

#include <cmath>

namespace syzlab {

void Report::residual(const std::string& name, double value, double tol, std::string note) {
    checks_.push_back({name, value, tol, CheckKind::Residual, std::isfinite(value) && value < tol, std::move(note)});
}

void Report::lower_bound(const std::string& name, double value, double bound, std::string note) {
    checks_.push_back({name, value, bound, CheckKind::LowerBound, std::isfinite(value) && value > bound, std::move(note)});
}

void Report::verdict(const std::string& name, bool ok, std::string note) {
    checks_.push_back({name, ok ? 1.0 : 0.0, 0.0, CheckKind::Verdict, ok, std::move(note)});
}

void Report::info(const std::string& name, double value, std::string note) {
    checks_.push_back({name, value, 0.0, CheckKind::Info, true, std::move(note)});
}

void Report::append(const Report& other, const std::string& prefix) {
    for (Check c : other.checks_) {
        c.name = prefix + c.name;
        checks_.push_back(std::move(c));
    }
}

const Check& Report::at(const std::string& name) const {
    for (const auto& c : checks_)
        if (c.name == name) return c;
    throw Error(Errc::Internal, "no check named " + name);
}

bool Report::has(const std::string& name) const {
    for (const auto& c : checks_)
        if (c.name == name) return true;
    return false;
}

bool Report::passed() const {
    for (const auto& c : checks_)
        if (!c.pass) return false;
    return true;
}

const char* check_kind_name(CheckKind k) {
    switch (k) {
        case CheckKind::Residual: return "residual";
        case CheckKind::LowerBound: return "lower_bound";
        case CheckKind::Verdict: return "verdict";
        case CheckKind::Info: return "info";
    }
    return "?";
}

}  // namespace syzlab
