#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mackey/chow.hpp"
#include "mackey/product.hpp"
#include "mackey/reciprocity.hpp"
#include "mackey/rewrite.hpp"

using namespace mackey;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kNotStabilized = 2;

struct Common {
  std::string field = "3^1";
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;
};

ff::FieldPtr parse_field(const std::string& text) {
  const auto caret = text.find('^');
  try {
    const auto p = static_cast<std::uint32_t>(std::stoul(text.substr(0, caret)));
    const auto d = caret == std::string::npos ? 1u : static_cast<std::uint32_t>(std::stoul(text.substr(caret + 1)));
    return ff::make_field(p, d);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("field '" + text + "' is not of the form p^d");
  }
}

// Splits at commas outside brackets, so "3^2:[1,2],(1;2)" has two items.
std::vector<std::string> split_top(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '[' || c == '(' || c == '<') ++depth;
    if (c == ']' || c == ')' || c == '>') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void render_text(std::ostream& os, const json& j, const std::string& prefix = "") {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      render_text(os, v, prefix + k + ".");
    } else {
      os << prefix << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

void emit(const Common& c, json report) {
  report["seed"] = c.seed;
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw std::runtime_error("cannot write " + c.output);
    os = &file;
  }
  if (c.format == "text") render_text(*os, report);
  else *os << report.dump(2) << "\n";
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--field", c.field, "base field p^d")->capture_default_str();
  cmd->add_option("-o,--output", c.output, "write the report to a file");
  cmd->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  cmd->add_option("--seed", c.seed, "recorded in the report")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mackey products, symbol certificates and relative Chow groups over finite fields"};
  app.require_subcommand(1);
  Common common;

  std::string functors;
  std::uint32_t dmax = 3;
  bool naive = false;
  auto* mackey_cmd = app.add_subcommand("mackey", "order of a Mackey product with a stabilization scan");
  add_common(mackey_cmd, common);
  mackey_cmd->add_option("--functors", functors, "e.g. GM,GM or GA,ELL:1,1 or GENJAC:t^2,GM")->required();
  mackey_cmd->add_option("--dmax", dmax, "extension-degree bound")->capture_default_str();
  mackey_cmd->add_flag("--naive", naive, "use the elementary-tensor presentation");

  std::string entries, strategy = "DIVISIBILITY";
  std::uint32_t point_degree = 1;
  auto* prove_cmd = app.add_subcommand("prove-zero", "certificate that a symbol vanishes");
  add_common(prove_cmd, common);
  prove_cmd->add_option("--functors", functors)->required();
  prove_cmd->add_option("--entries", entries, "comma-separated entries, e.g. 1,2 or 3^2:[0,1],3^2:[1,1]")->required();
  prove_cmd->add_option("--degree", point_degree, "degree of the point y over the base")->capture_default_str();
  prove_cmd->add_option("--strategy", strategy, "GA_CHAIN or DIVISIBILITY")->capture_default_str();

  std::string modulus;
  std::uint32_t truncation = 0;
  auto* chow_cmd = app.add_subcommand("chow", "relative Chow group of P^1 - supp(D)");
  add_common(chow_cmd, common);
  chow_cmd->add_option("--modulus", modulus, "effective divisor, e.g. 2*inf or (0)+(inf)")->required();
  chow_cmd->add_option("--n", truncation, "N_pts = N_fun bound (default 4 deg D + 4, clamped)");

  std::string m1, m2;
  std::uint32_t bound_dmax = 2;
  auto* bound_cmd = app.add_subcommand("product-bound", "order bound for CH_0 of a product of two curves");
  add_common(bound_cmd, common);
  bound_cmd->add_option("--m1", m1)->required();
  bound_cmd->add_option("--m2", m2)->required();
  bound_cmd->add_option("--dmax", bound_dmax, "degree bound for the Mackey factor")->capture_default_str();

  std::string section, curve;
  std::uint32_t max_mult = 3;
  std::size_t instances = 120;
  auto* rec_cmd = app.add_subcommand("reciprocity", "conductor search and reciprocity-law check");
  add_common(rec_cmd, common);
  rec_cmd->add_option("--section", section, "GM:<f> or GA:<f>")->required();
  rec_cmd->add_option("--curve", curve, "e.g. P1-{0,inf}")->required();
  rec_cmd->add_option("--max-multiplicity", max_mult)->capture_default_str();
  rec_cmd->add_option("--instances", instances, "test functions per candidate")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto F = parse_field(common.field);
    if (mackey_cmd->parsed()) {
      auto list = product::parse_functor_list(functors, F);
      auto scan = product::stabilization_scan(list, F, 1, dmax,
                                              naive ? product::LayerMode::Naive : product::LayerMode::Structured);
      json report = scan.steps.back().to_json();
      report["field"] = F->name();
      report["functors"] = product::functor_list_label(list);
      report["mode"] = naive ? "naive" : "structured";
      report["scan"] = scan.to_json()["scan"];
      report["stabilized"] = scan.stabilized;
      emit(common, report);
      return scan.stabilized ? kOk : kNotStabilized;
    }
    if (prove_cmd->parsed()) {
      product::Symbol s;
      s.functors = product::parse_functor_list(functors, F);
      s.point = product::FinitePoint::over(F, point_degree);
      for (const auto& e : split_top(entries)) {
        const std::size_t i = s.entries.size();
        if (i >= s.functors.size()) throw std::invalid_argument("more entries than functors");
        s.entries.push_back(s.functors[i]->parse_value(s.point.ext, e));
      }
      auto cert = rewrite::reduce_symbol(s, rewrite::parse_strategy(strategy));
      json report = cert.to_json();
      report["field"] = F->name();
      emit(common, report);
      return cert.zero && cert.validated ? kOk : kFailed;
    }
    if (chow_cmd->parsed()) {
      auto mod = chow::Modulus::parse(F, modulus);
      auto r = chow::chow_scan(mod, truncation ? std::optional<std::uint32_t>(truncation) : std::nullopt);
      json report = r.to_json();
      report["field"] = F->name();
      emit(common, report);
      if (!r.stabilized) return kNotStabilized;
      return r.oracle_agrees ? kOk : kFailed;
    }
    if (bound_cmd->parsed()) {
      auto b = chow::product_bound(chow::Modulus::parse(F, m1), chow::Modulus::parse(F, m2), bound_dmax);
      json report = b.to_json();
      report["field"] = F->name();
      const bool agree = b.j1 == b.j1_closed_form && b.j2 == b.j2_closed_form;
      report["oracle_agrees"] = agree;
      emit(common, report);
      return agree ? kOk : kFailed;
    }
    if (rec_cmd->parsed()) {
      auto s = reciprocity::Section::parse(F, section);
      auto c = reciprocity::OpenCurve::parse(F, curve);
      auto r = reciprocity::find_conductor(s, c, max_mult, instances);
      json report = r.to_json();
      report["field"] = F->name();
      report["section"] = s.to_string();
      report["curve"] = c.to_string();
      emit(common, report);
      return r.conductor && report["all_pass"].get<bool>() ? kOk : kFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
