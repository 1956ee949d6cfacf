#pragma once

#include <filesystem>

#include "webdep/classify/config.hpp"
#include "webdep/probes/probe_config.hpp"

namespace webdep {

struct AppConfig {
  ClassificationConfig classification;
  ProbeConfig probe;
};

// Reads webdep.json. File paths inside it are relative to the file's own
// directory. Absent keys keep their defaults; unknown keys are an error.
// Throws kConfigError / kIo.
AppConfig load_app_config(const std::filesystem::path& path);

}  // namespace webdep
