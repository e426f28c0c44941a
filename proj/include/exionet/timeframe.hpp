#pragma once

#include <string>
#include <vector>

namespace exionet {

enum class PeriodMode { mean, sum };

/// A contiguous, inclusive range of years under a label (P1..P4 by default).
struct Period {
    std::string label;
    int start_year = 0;
    int end_year = 0;
    PeriodMode mode = PeriodMode::mean;

    int length() const { return end_year - start_year + 1; }
};

/// The four periods used throughout the study (1995-2001, 2002-2008, 2009-2015, 2016-2022).
std::vector<Period> default_periods(PeriodMode mode = PeriodMode::mean);

/// Either a single year (label "1995") or a period (label "P1").
struct Timeframe {
    std::string label;
    int start_year = 0;
    int end_year = 0;

    static Timeframe year(int y) { return {std::to_string(y), y, y}; }
    static Timeframe period(const Period& p) { return {p.label, p.start_year, p.end_year}; }

    bool is_year() const { return start_year == end_year && label == std::to_string(start_year); }
    friend bool operator==(const Timeframe&, const Timeframe&) = default;
};

std::string to_string(PeriodMode mode);
PeriodMode parse_period_mode(const std::string& text);

} // namespace exionet
