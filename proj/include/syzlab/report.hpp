#pragma once

#include <string>
#include <vector>

namespace syzlab {

enum class CheckKind {
    Residual,    // passes when value < bound
    LowerBound,  // passes when value > bound
    Verdict,     // passes when value != 0
    Info,        // always passes
};

struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    CheckKind kind = CheckKind::Info;
    bool pass = true;
    std::string note;
};

class Report {
public:
    void residual(const std::string& name, double value, double tol, std::string note = {});
    void lower_bound(const std::string& name, double value, double bound, std::string note = {});
    void verdict(const std::string& name, bool ok, std::string note = {});
    void info(const std::string& name, double value, std::string note = {});
    void append(const Report& other, const std::string& prefix = {});

    const std::vector<Check>& checks() const { return checks_; }
    // Throws Errc::Internal when the check is missing.
    const Check& at(const std::string& name) const;
    bool has(const std::string& name) const;
    bool passed() const;

private:
    std::vector<Check> checks_;
};

const char* check_kind_name(CheckKind k);

}  // namespace syzlab
