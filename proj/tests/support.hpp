#pragma once

#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hype/csv.hpp"
#include "hype/error.hpp"

namespace testing_support {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(HYPE_TEST_DATA) / name; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline nlohmann::json load_json(const std::filesystem::path& p) { return nlohmann::json::parse(slurp(p)); }

/// Values of one named column, parsed as doubles.
inline std::vector<double> read_column(const std::filesystem::path& p, const std::string& column) {
    std::ifstream in(p);
    const auto table = hype::csv::read(in);
    const auto col = table.require(column);
    std::vector<double> out;
    for (const auto& row : table.rows) out.push_back(std::strtod(row.fields[col].c_str(), nullptr));
    return out;
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("hype_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

struct CommandResult {
    int exit_code;
    std::string out;
    std::string err;
};

/// Runs the CLI with `args` (already shell-quoted where needed).
inline CommandResult run_cli(const std::string& args, const std::filesystem::path& scratch) {
    const auto out = scratch / "stdout.txt";
    const auto err = scratch / "stderr.txt";
    const std::string cmd = std::string("\"") + HYPE_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, slurp(out), slurp(err)};
}

}  // namespace testing_support
