#include "spinbath/donor.hpp"

#include <filesystem>

#include "spinbath/errors.hpp"
#include "spinbath/io.hpp"

namespace spinbath {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double require_number(const std::map<std::string, std::string>& kv, const std::string& key,
                      const std::string& path) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError(path + ": missing key '" + key + "'");
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path + ": key '" + key + "' is not a number: " + it->second);
  }
}

}  // namespace

DonorParams load_donor_file(const std::string& path) {
  const auto kv = read_key_value_file(path);
  DonorParams d;
  const auto label = kv.find("label");
  d.label = label == kv.end() ? std::filesystem::path(path).stem().string() : label->second;
  d.host_spin = require_number(kv, "host_spin", path);
  d.hyperfine = kTwoPi * require_number(kv, "hyperfine_hz", path);
  d.electron_gyromag = require_number(kv, "electron_gyromagnetic_rad_per_s_t", path);
  d.host_nuclear_gyromag = require_number(kv, "host_nuclear_gyromagnetic_rad_per_s_t", path);
  d.ionization_energy_ev = require_number(kv, "ionization_energy_ev", path);
  d.validate();
  return d;
}

DonorParams resolve_donor(const std::string& name_or_path, const std::string& preset_dir) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path)) return load_donor_file(name_or_path);
  const fs::path preset = fs::path(preset_dir) / (name_or_path + ".donor");
  if (fs::exists(preset)) return load_donor_file(preset.string());
  throw ConfigError("donor '" + name_or_path + "' is neither a file nor a preset in " +
                    preset_dir);
}

}  // namespace spinbath
