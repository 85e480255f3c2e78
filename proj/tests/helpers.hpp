#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "lisa/core_model.hpp"

namespace lisa::testing {

/// Two-object driver and recipient; p(A) shares s1 with r(T), q(B) shares s3
/// with u(D). The affordance sits on r.
inline TaskSpec tiny_task() {
  TaskSpec t;
  t.name = "tiny";
  AnalogSpec drv;
  drv.name = "Perception";
  drv.role = Analog::Driver;
  drv.objects = {{"A", {"token", "a*"}}, {"B", {"token", "b*"}}};
  drv.propositions = {{"p(A)", "p", {{"s1", "s2"}}, {"A"}}, {"q(B)", "q", {{"s3"}}, {"B"}}};
  AnalogSpec rec;
  rec.name = "Memory";
  rec.role = Analog::Recipient;
  rec.objects = {{"T", {"token", "t"}}, {"D", {"token", "d"}}};
  rec.propositions = {{"r(T)", "r", {{"s1", "aff"}}, {"T"}}, {"u(D)", "u", {{"s3", "noaff"}}, {"D"}}};
  t.analogs = {drv, rec};
  t.probes = {"aff", "a*", "noaff", "b*"};
  return t;
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace lisa::testing
