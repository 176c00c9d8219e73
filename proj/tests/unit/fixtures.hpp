#pragma once

#include "normlog/model.hpp"

#include <string>

#ifndef NORMLOG_FIXTURES
#define NORMLOG_FIXTURES "tests/fixtures"
#endif

inline normlog::Model fixture(const std::string& name) {
  return normlog::load_model_file(std::string(NORMLOG_FIXTURES) + "/" + name + ".json");
}
