// selftest.hpp — built-in verification suite runnable from the CLI.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ogp {

struct SelftestCase {
    std::string name;
    bool passed = false;
    double metric = 0.0;  // worst observed value
    double bound = 0.0;   // the tolerance it must stay under
};

struct SelftestReport {
    std::vector<SelftestCase> cases;

    int failures() const {
        int n = 0;
        for (const auto& c : cases) n += c.passed ? 0 : 1;
        return n;
    }
};

SelftestReport run_selftest(std::uint64_t seed);

}  // namespace ogp
