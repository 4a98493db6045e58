#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "hype/error.hpp"

namespace hype {

/// Calendar date with day resolution.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    constexpr Date(int y, unsigned m, unsigned d)
        : days_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                            std::chrono::day{d}}) {}

    /// Strict YYYY-MM-DD. Throws ValidationError on anything else.
    static Date parse(std::string_view text) {
        auto fail = [&] {
            throw ValidationError("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
        };
        if (text.size() != 10 || text[4] != '-' || text[7] != '-') fail();
        auto digits = [&](std::size_t pos, std::size_t len) {
            int v = 0;
            for (std::size_t i = pos; i < pos + len; ++i) {
                const char c = text[i];
                if (c < '0' || c > '9') fail();
                v = v * 10 + (c - '0');
            }
            return v;
        };
        const int y = digits(0, 4);
        const int m = digits(5, 2);
        const int d = digits(8, 2);
        const std::chrono::year_month_day ymd{std::chrono::year{y},
                                              std::chrono::month{static_cast<unsigned>(m)},
                                              std::chrono::day{static_cast<unsigned>(d)}};
        if (!ymd.ok()) fail();
        return Date{std::chrono::sys_days{ymd}};
    }

    [[nodiscard]] std::string str() const {
        const std::chrono::year_month_day ymd{days_};
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    [[nodiscard]] constexpr std::chrono::sys_days days() const noexcept { return days_; }

    [[nodiscard]] constexpr bool is_weekend() const noexcept {
        const std::chrono::weekday wd{days_};
        return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
    }

    [[nodiscard]] constexpr Date operator+(int n) const noexcept {
        return Date{days_ + std::chrono::days{n}};
    }

    friend constexpr auto operator<=>(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

}  // namespace hype
