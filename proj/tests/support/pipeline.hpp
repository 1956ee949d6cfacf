#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace webdep::test {

std::filesystem::path test_data_dir();
std::filesystem::path test_config_path();
std::filesystem::path corpus_dir();
std::filesystem::path golden_dir();
std::filesystem::path fixtures_dir();

// Runs the command-line tool in-process; returns its exit code.
int run_cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr);

// replay -> classify -> build -> analyze -> whatif -> collateral over the
// corpus, plus diff over the incident fixture, writing into `out_dir`.
// Returns a description of the first step with an unexpected exit code, or
// an empty string.
std::string run_pipeline(const std::filesystem::path& out_dir);

// Relative paths of every regular file under `dir`, sorted.
std::vector<std::string> list_files(const std::filesystem::path& dir);

// Differences between two trees: missing, extra and differing files.
std::vector<std::string> compare_trees(const std::filesystem::path& expected, const std::filesystem::path& actual);

std::string read_file(const std::filesystem::path& path);

// A fresh empty directory under the system temp directory.
std::filesystem::path fresh_temp_dir(const std::string& stem);

}  // namespace webdep::test
