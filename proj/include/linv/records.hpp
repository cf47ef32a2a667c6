#pragma once

#include <json.hpp>

#include <string>

#include "linv/rational.hpp"

namespace linv {

/// One output datum: the p-adic valuation of the L-invariant attached to one
/// prime of the Hecke field of one newform orbit, with its certificate data.
struct LInvariantRecord {
  long p = 0, N = 0, k = 0;
  int ap_sign = 0, w_sign = 0;
  Int D = 1;
  std::string component;
  long packet = 0;
  long multiplicity = 1;
  long n_used = 1;
  bool bound_ok = false;
  bool has_vL = false;
  Rat vL, vL1, vLinfty, nu;
  long residual_class_id = -1;
  std::string residues;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["type"] = "record";
    j["p"] = p;
    j["N"] = N;
    j["k"] = k;
    j["ap_sign"] = ap_sign;
    j["w_sign"] = w_sign;
    j["D"] = D.get_str();
    j["component"] = component;
    j["packet"] = packet;
    j["multiplicity"] = multiplicity;
    j["n_used"] = n_used;
    j["bound_ok"] = bound_ok;
    if (has_vL) {
      j["vL"] = rat_to_string(vL);
      j["vL1"] = rat_to_string(vL1);
    } else {
      j["vL"] = nullptr;
      j["vL1"] = nullptr;
    }
    j["vLinfty"] = rat_to_string(vLinfty);
    j["nu"] = rat_to_string(nu);
    j["residual_class_id"] = residual_class_id;
    j["residues"] = residues;
    return j;
  }

  static LInvariantRecord from_json(const nlohmann::json& j) {
    LInvariantRecord r;
    r.p = j.at("p").get<long>();
    r.N = j.at("N").get<long>();
    r.k = j.at("k").get<long>();
    r.ap_sign = j.at("ap_sign").get<int>();
    r.w_sign = j.at("w_sign").get<int>();
    r.D = Int(j.at("D").get<std::string>());
    r.component = j.at("component").get<std::string>();
    r.packet = j.at("packet").get<long>();
    r.multiplicity = j.at("multiplicity").get<long>();
    r.n_used = j.at("n_used").get<long>();
    r.bound_ok = j.at("bound_ok").get<bool>();
    r.has_vL = !j.at("vL").is_null();
    if (r.has_vL) {
      r.vL = rat_from_string(j.at("vL").get<std::string>());
      r.vL1 = rat_from_string(j.at("vL1").get<std::string>());
    }
    r.vLinfty = rat_from_string(j.at("vLinfty").get<std::string>());
    r.nu = rat_from_string(j.at("nu").get<std::string>());
    r.residual_class_id = j.at("residual_class_id").get<long>();
    r.residues = j.at("residues").get<std::string>();
    return r;
  }
};

/// Offline recheck of the stored certificate: bound_ok records must satisfy
/// v(L_n) - nu < n k/2 - floor(log(k-1)/log p) and vL = vL1 - vLinfty.
inline bool recheck_certificate(const LInvariantRecord& r) {
  if (!r.bound_ok) return true;
  if (!r.has_vL) return false;
  Rat threshold = Rat(r.n_used * r.k) / 2 - Rat(floor_log(r.k - 1, r.p));
  threshold.canonicalize();
  if (!(r.vL1 - r.nu < threshold)) return false;
  return r.vL == r.vL1 - r.vLinfty;
}

}  // namespace linv
