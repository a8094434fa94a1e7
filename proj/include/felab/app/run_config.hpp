#pragma once

#include <felab/base/exceptions.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>

namespace felab::app
{

/// Everything one run needs. Levels are global refinements of the unit
/// square/cube, or adaptive steps for the circle demo.
struct RunConfig
{
  int dim                 = 2;
  unsigned degree         = 1;
  unsigned mapping_degree = 1;
  unsigned min_level      = 3;
  unsigned max_level      = 6;
  std::string problem     = "sinsin";
  std::string solver      = "assembled-cg";
  double tolerance        = 1e-10;
  unsigned max_iterations = 10000;
  unsigned threads        = 1;
  /// CSV destination of the convergence table; empty means stdout
  std::string output;
  /// solution file written by the solve command; empty means none
  std::string vtk_output;
};

inline const std::set<std::string> &known_problems()
{
  static const std::set<std::string> p{"sinsin", "circle-demo", "constant-rhs"};
  return p;
}

inline const std::set<std::string> &known_solvers()
{
  static const std::set<std::string> s{"assembled-cg", "mf-cg", "gmg-cg"};
  return s;
}

/// Throws ConfigError naming the first offending field.
inline void validate(const RunConfig &c)
{
  auto fail = [](const std::string &key, const std::string &what) { throw ConfigError("key '" + key + "': " + what); };
  if (c.dim != 2 && c.dim != 3)
    fail("dim", "must be 2 or 3, got " + std::to_string(c.dim));
  if (c.degree < 1 || c.degree > 4)
    fail("degree", "must be in 1..4, got " + std::to_string(c.degree));
  if (c.mapping_degree < 1 || c.mapping_degree > 4)
    fail("mapping_degree", "must be in 1..4, got " + std::to_string(c.mapping_degree));
  if (c.min_level > c.max_level)
    fail("min_level", "exceeds max_level");
  if (c.max_level > 12)
    fail("max_level", "must be at most 12");
  if (!known_problems().count(c.problem))
    fail("problem", "unknown problem '" + c.problem + "' (sinsin, circle-demo, constant-rhs)");
  if (!known_solvers().count(c.solver))
    fail("solver", "unknown solver '" + c.solver + "' (assembled-cg, mf-cg, gmg-cg)");
  if (!(c.tolerance > 0 && c.tolerance < 1))
    fail("tolerance", "must be in (0, 1)");
  if (c.max_iterations < 1)
    fail("max_iterations", "must be positive");
  if (c.threads < 1)
    fail("threads", "must be positive");
  if (c.problem == "circle-demo" && c.dim != 2)
    fail("dim", "the circle demo is two-dimensional");
  if (c.problem == "circle-demo" && c.solver == "gmg-cg")
    fail("solver", "gmg-cg needs a globally refined mesh; the circle demo is adaptive");
}

/// Reads a JSON object into a RunConfig. Unknown keys and values of the wrong
/// type are rejected by name.
inline RunConfig parse_run_config(const nlohmann::json &j)
{
  if (!j.is_object())
    throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  auto unsigned_value = [](const std::string &key, const nlohmann::json &v) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError("key '" + key + "': expected a non-negative integer, got " + v.dump());
    return v.get<unsigned>();
  };
  auto string_value = [](const std::string &key, const nlohmann::json &v) {
    if (!v.is_string())
      throw ConfigError("key '" + key + "': expected a string, got " + v.dump());
    return v.get<std::string>();
  };
  for (const auto &[key, v] : j.items())
    {
      if (key == "dim")
        c.dim = int(unsigned_value(key, v));
      else if (key == "degree")
        c.degree = unsigned_value(key, v);
      else if (key == "mapping_degree")
        c.mapping_degree = unsigned_value(key, v);
      else if (key == "min_level")
        c.min_level = unsigned_value(key, v);
      else if (key == "max_level")
        c.max_level = unsigned_value(key, v);
      else if (key == "level")
        c.min_level = c.max_level = unsigned_value(key, v);
      else if (key == "problem")
        c.problem = string_value(key, v);
      else if (key == "solver")
        c.solver = string_value(key, v);
      else if (key == "tolerance")
        {
          if (!v.is_number())
            throw ConfigError("key 'tolerance': expected a number, got " + v.dump());
          c.tolerance = v.get<double>();
        }
      else if (key == "max_iterations")
        c.max_iterations = unsigned_value(key, v);
      else if (key == "threads")
        c.threads = unsigned_value(key, v);
      else if (key == "output")
        c.output = string_value(key, v);
      else if (key == "vtk_output")
        c.vtk_output = string_value(key, v);
      else
        throw ConfigError("unknown key '" + key + "'");
    }
  validate(c);
  return c;
}

inline RunConfig parse_run_config(const std::string &text)
{
  nlohmann::json j;
  try
    {
      j = nlohmann::json::parse(text);
    }
  catch (const nlohmann::json::parse_error &e)
    {
      // name the last key seen before the error
      std::string near;
      const std::regex key_pattern("\"([^\"]*)\"\\s*:");
      const auto head = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
      for (auto it = std::sregex_iterator(head.begin(), head.end(), key_pattern); it != std::sregex_iterator(); ++it)
        near = (*it)[1];
      throw ConfigError("malformed JSON at byte " + std::to_string(e.byte) +
                        (near.empty() ? std::string() : " after key '" + near + "'") + ": " + e.what());
    }
  return parse_run_config(j);
}

inline RunConfig parse_run_config(const char *text) { return parse_run_config(std::string(text)); }

inline RunConfig read_run_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream s;
  s << in.rdbuf();
  return parse_run_config(s.str());
}

} // namespace felab::app
