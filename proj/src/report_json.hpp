#pragma once

#include <string>

#include "harness.hpp"

namespace rdde {

std::string to_json(const VerificationReport& r);
std::string to_json(const SweepResult& r);
std::string to_json(const MvtPoints& m);

}  // namespace rdde
