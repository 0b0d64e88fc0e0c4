//------------------------------------------------------------------------------
//
//   Copyright 2026 The usvcg Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Command-line driver. Every command is a thin wrapper over the C API: it
// reads the input documents, forwards them with the flags encoded as a JSON
// options object, prints the result document and exits with the API status.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "usvcg/usvcg.h"

namespace {

using Json = nlohmann::json;

std::string ReadFile(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw std::invalid_argument("cannot read '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(std::string const &path, std::string const &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << text;
}

/// Inline JSON when the argument starts with '{' or '[', a file path otherwise.
std::string JsonArg(std::string const &arg)
{
  auto const first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '['))
  {
    return arg;
  }
  return ReadFile(arg);
}

Json ParseOrThrow(std::string const &text, std::string const &what)
{
  try
  {
    return Json::parse(text);
  }
  catch (Json::parse_error const &e)
  {
    throw std::invalid_argument(what + ": " + e.what());
  }
}

std::string Cell(Json const &v)
{
  if (v.is_null())
  {
    return "";
  }
  if (v.is_string())
  {
    return v.get<std::string>();
  }
  if (v.is_number_float())
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

/// CSV with a header row; `columns` fixes the order, missing cells are empty.
std::string Csv(Json const &rows, std::vector<std::string> const &columns)
{
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c)
  {
    out += (c ? "," : "") + columns[c];
  }
  out += '\n';
  for (auto const &row : rows)
  {
    for (std::size_t c = 0; c < columns.size(); ++c)
    {
      out += c ? "," : "";
      if (row.contains(columns[c]))
      {
        out += Cell(row.at(columns[c]));
      }
    }
    out += '\n';
  }
  return out;
}

struct Output
{
  std::string json_path;
  std::string csv_path;
  bool        quiet = false;
};

class Instance
{
public:
  explicit Instance(std::string const &text)
  {
    status_ = usvcg_instance_create(text.c_str(), &handle_);
  }
  ~Instance() { usvcg_instance_destroy(handle_); }
  Instance(Instance const &)            = delete;
  Instance &operator=(Instance const &) = delete;

  int                   status() const { return status_; }
  usvcg_instance const *get() const { return handle_; }

private:
  usvcg_instance *handle_ = nullptr;
  int             status_ = USVCG_OK;
};

/// Prints the result, writes the requested files and returns the exit code.
int Finish(int status, char *result, Output const &out, Json const *csv_rows = nullptr,
           std::vector<std::string> const &columns = {})
{
  if (result == nullptr)
  {
    std::cerr << "error: " << usvcg_last_error() << '\n';
    return status;
  }
  std::string const text = std::string(result) + "\n";
  usvcg_string_free(result);
  if (!out.quiet)
  {
    std::cout << text;
  }
  if (!out.json_path.empty())
  {
    WriteFile(out.json_path, text);
  }
  if (!out.csv_path.empty() && csv_rows != nullptr)
  {
    Json const doc = Json::parse(text);
    Json       rows = Json::array();
    // csv_rows is a JSON pointer into the result document.
    auto const ptr = Json::json_pointer(csv_rows->get<std::string>());
    if (doc.contains(ptr))
    {
      rows = doc.at(ptr);
    }
    WriteFile(out.csv_path, Csv(rows, columns));
  }
  if (status == USVCG_PENDING)
  {
    std::cerr << "pending: follow-up answers are required\n";
  }
  else if (status == USVCG_PROPERTY_FAILED)
  {
    std::cerr << "FAIL: property violated\n";
  }
  return status;
}

int Failed(int status)
{
  std::cerr << "error: " << usvcg_last_error() << '\n';
  return status;
}

std::vector<std::size_t> ParseSizes(std::string const &list)
{
  std::vector<std::size_t> sizes;
  std::stringstream        ss(list);
  std::string              item;
  while (std::getline(ss, item, ','))
  {
    std::size_t pos = 0;
    long long   v   = std::stoll(item, &pos);
    if (pos != item.size() || v <= 0)
    {
      throw std::invalid_argument("--n-list entries must be positive integers");
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  return sizes;
}

void AddOutput(CLI::App *cmd, Output &out, bool csv)
{
  cmd->add_option("-o,--out", out.json_path, "Write the result document to this file");
  if (csv)
  {
    cmd->add_option("--csv", out.csv_path, "Write the table rows as CSV to this file");
  }
  cmd->add_flag("--quiet", out.quiet, "Do not print the result document");
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Utility-sensitive VCG budgeting engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(usvcg_version()));

  Output out;

  std::string instance_path;
  std::string type_arg;
  bool        use_mean = false;
  auto       *solve    = app.add_subcommand("solve", "Optimal budget decision for one type");
  solve->add_option("instance", instance_path, "Instance file")->required();
  auto *type_opt = solve->add_option("--type", type_arg, "Type as inline JSON or a file path");
  solve->add_flag("--mean", use_mean, "Use the mean type of the instance profile")
      ->excludes(type_opt);
  AddOutput(solve, out, false);

  std::string ballots_path;
  std::string answers_path;
  auto       *elicit = app.add_subcommand("elicit", "Recover types from ballots");
  elicit->add_option("instance", instance_path, "Instance file")->required();
  elicit->add_option("ballots", ballots_path, "Ballot file (defaults to the instance's ballots)");
  elicit->add_option("--answers", answers_path, "Follow-up answer document");
  AddOutput(elicit, out, false);

  std::string bias_path;
  bool        non_positive = false;
  bool        hetero       = false;
  double      gamma        = 0.0;
  double      reserve      = 0.0;
  auto       *mechanism    = app.add_subcommand("mechanism", "Run the mechanism on the profile");
  mechanism->add_option("instance", instance_path, "Instance file")->required();
  auto *bias_opt = mechanism->add_option("--bias", bias_path, "Bias specification file");
  auto *np_opt   = mechanism->add_flag("--non-positive", non_positive, "Non-positive payments");
  auto *het_opt  = mechanism->add_flag("--hetero", hetero, "Heterogeneous tax weights");
  bias_opt->excludes(np_opt)->excludes(het_opt);
  np_opt->excludes(het_opt);
  mechanism->add_option("--gamma", gamma, "Penalty constant (default 2(1+mu))");
  mechanism->add_option("--reserve", reserve, "Reserve r subtracted from payments");
  AddOutput(mechanism, out, false);

  std::string result_path;
  auto       *check = app.add_subcommand("check", "Re-verify a mechanism result file");
  check->add_option("instance", instance_path, "Instance file")->required();
  check->add_option("result", result_path, "Result file written by 'mechanism'")->required();
  AddOutput(check, out, false);

  std::size_t   trials    = 1000;
  std::uint64_t seed      = 42;
  std::size_t   coalition = 0;
  auto         *fuzz      = app.add_subcommand("fuzz", "Random misreport search");
  fuzz->add_option("instance", instance_path, "Instance file")->required();
  fuzz->add_option("--trials", trials, "Number of trials")->capture_default_str();
  fuzz->add_option("--seed", seed, "Random seed")->capture_default_str();
  fuzz->add_option("--coalition", coalition, "Also probe coalitions of this size");
  AddOutput(fuzz, out, true);

  std::string sigma_path;
  std::string n_list = "10,100,1000";
  auto       *converge = app.add_subcommand("converge", "Payment decay over population size");
  converge->add_option("sigma", sigma_path, "Characteristic triplet file")->required();
  converge->add_option("--n-list", n_list, "Comma-separated population sizes")
      ->capture_default_str();
  converge->add_option("--seed", seed, "Random seed")->capture_default_str();
  converge->add_flag("--non-positive", non_positive, "Also run the non-positive scheme");
  converge->add_option("--gamma", gamma, "Penalty constant (default 2(1+mu))");
  AddOutput(converge, out, true);

  auto *validate = app.add_subcommand("validate", "Check the modelling assumptions");
  validate->add_option("instance", instance_path, "Instance file")->required();
  AddOutput(validate, out, false);

  double p = 0.3;
  double q = 0.5;
  auto  *diverge = app.add_subcommand("diverge", "Nominal against per-capita tax growth");
  diverge->add_option("--p", p, "Gain exponent")->capture_default_str();
  diverge->add_option("--q", q, "Money exponent")->capture_default_str();
  diverge->add_option("--n-list", n_list, "Comma-separated population sizes")
      ->capture_default_str();
  AddOutput(diverge, out, true);

  auto *continuity = app.add_subcommand("continuity", "Local continuity of the optimum");
  continuity->add_option("instance", instance_path, "Instance file")->required();
  continuity->add_option("--type", type_arg, "Type as inline JSON or a file path");
  AddOutput(continuity, out, true);

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::CallForVersion const &e)
  {
    return app.exit(e);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e);
    return USVCG_USAGE;
  }

  try
  {
    char *result = nullptr;
    if (app.got_subcommand(diverge))
    {
      Json opts = {{"p", p}, {"q", q}, {"n_list", ParseSizes(n_list)}};
      int  s    = usvcg_diverge(opts.dump().c_str(), &result);
      Json ptr  = "/rows";
      return Finish(s, result, out, &ptr,
                    {"n", "nominal_tax", "closed_form", "per_capita_tax"});
    }
    if (app.got_subcommand(converge))
    {
      Json opts = {{"n_list", ParseSizes(n_list)}, {"seed", seed}, {"non_positive", non_positive}};
      if (gamma > 0.0)
      {
        opts["gamma"] = gamma;
      }
      std::string const sigma = ReadFile(sigma_path);
      int  s   = usvcg_converge(sigma.c_str(), opts.dump().c_str(), &result);
      Json ptr = "/rows";
      return Finish(s, result, out, &ptr,
                    {"n", "tax", "max_abs_payment", "n_times_max", "sum_abs_payments",
                     "np_max_payment", "np_sum_abs", "np_all_non_positive",
                     "regularity_warnings"});
    }

    std::string instance_text = ReadFile(instance_path);
    if (app.got_subcommand(elicit) && !ballots_path.empty())
    {
      // A separate ballot file replaces any profile stored in the instance.
      Json inst    = ParseOrThrow(instance_text, instance_path);
      Json ballots = ParseOrThrow(ReadFile(ballots_path), ballots_path);
      inst.erase("types");
      inst["ballots"] = ballots.is_object() && ballots.contains("ballots") ? ballots["ballots"]
                                                                            : ballots;
      instance_text   = inst.dump();
    }
    Instance inst(instance_text);
    if (inst.status() != USVCG_OK)
    {
      return Failed(inst.status());
    }

    if (app.got_subcommand(solve))
    {
      if (!use_mean && type_arg.empty())
      {
        std::cerr << "error: solve needs --type or --mean\n";
        return USVCG_USAGE;
      }
      Json opts = Json::object();
      if (!type_arg.empty())
      {
        opts["type"] = ParseOrThrow(JsonArg(type_arg), "--type");
      }
      int const s = usvcg_solve(inst.get(), opts.dump().c_str(), &result);
      return Finish(s, result, out);
    }
    if (app.got_subcommand(elicit))
    {
      std::string answers;
      if (!answers_path.empty())
      {
        answers = ReadFile(answers_path);
      }
      int s = usvcg_elicit(inst.get(), answers_path.empty() ? nullptr : answers.c_str(), &result);
      return Finish(s, result, out);
    }
    if (app.got_subcommand(mechanism))
    {
      Json opts = Json::object();
      if (!bias_path.empty())
      {
        opts["bias"] = ParseOrThrow(ReadFile(bias_path), bias_path);
      }
      if (non_positive)
      {
        opts["non_positive"] = true;
        if (gamma > 0.0)
        {
          opts["gamma"] = gamma;
        }
        opts["r"] = reserve;
      }
      if (hetero)
      {
        opts["hetero"] = true;
      }
      int const s = usvcg_mechanism(inst.get(), opts.dump().c_str(), &result);
      return Finish(s, result, out);
    }
    if (app.got_subcommand(check))
    {
      std::string const stored = ReadFile(result_path);
      int const s = usvcg_check(inst.get(), stored.c_str(), &result);
      return Finish(s, result, out);
    }
    if (app.got_subcommand(fuzz))
    {
      Json opts = {{"trials", trials}, {"seed", seed}, {"coalition", coalition},
                   {"rows", !out.csv_path.empty()}};
      int  s    = usvcg_fuzz(inst.get(), opts.dump().c_str(), &result);
      Json ptr  = "/sdsic/rows";
      return Finish(s, result, out, &ptr, {"trial", "agent", "family", "gain"});
    }
    if (app.got_subcommand(validate))
    {
      int const s = usvcg_validate(inst.get(), &result);
      return Finish(s, result, out);
    }
    if (app.got_subcommand(continuity))
    {
      Json opts = Json::object();
      if (!type_arg.empty())
      {
        opts["type"] = ParseOrThrow(JsonArg(type_arg), "--type");
      }
      int  s   = usvcg_continuity(inst.get(), opts.dump().c_str(), &result);
      Json ptr = "/rows";
      return Finish(s, result, out, &ptr, {"delta", "displacement", "ratio"});
    }
  }
  catch (std::invalid_argument const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return USVCG_SCHEMA;
  }
  catch (std::exception const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return USVCG_USAGE;
  }
  return USVCG_USAGE;
}
