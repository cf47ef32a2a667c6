#pragma once

#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "linv/galois.hpp"
#include "linv/lfun.hpp"
#include "linv/records.hpp"
#include "linv/tate.hpp"

namespace linv {

struct RunConfig {
  long p = 3;
  long N = 1;
  long k_min = 6;
  long k_max = 36;
  long precision_guard = 10;
  long twist_bound = 400;
  long n_max = 3;
  long residual_bound = 0;  // 0: Sturm default from k_max
  std::string out_path;
  bool resume = false;
  long workers = 1;
  bool allow_p2 = false;

  void validate() const {
    if (!is_prime(Int(p))) throw DomainError("config: p must be prime");
    if (p == 2 && !allow_p2)
      throw DomainError(
          "config: p = 2 is convention-dependent; pass --allow-p2 to enable");
    if (N < 1 || std::gcd(N, p) != 1)
      throw DomainError("config: N must be >= 1 and coprime to p");
    if (k_min % 2 || k_max % 2 || k_min < 2)
      throw DomainError("config: weights must be even and >= 2");
  }

  long sturm_bound() const {
    if (residual_bound > 0) return residual_bound;
    long idx = N * p;
    long m = N * p;
    for (long q = 2; q * q <= m; ++q) {
      if (m % q) continue;
      idx = idx / q * (q + 1);
      while (m % q == 0) m /= q;
    }
    if (m > 1) idx = idx / m * (m + 1);
    return (k_max * idx + 11) / 12;
  }

  long initial_precision(long k) const {
    return (k + 1) / 2 + floor_log(std::max(2L, k - 1), p) + precision_guard;
  }
};

struct WeightOutcome {
  long k = 0;
  std::vector<LInvariantRecord> records;
  std::vector<std::string> errors;
};

namespace detail {

struct PacketJob {
  EigenPacket pkt;
  std::unique_ptr<LFunEvaluator> ev;
  Rat nu;
};

/// All packets of one parity copy at one precision, with evaluators.
inline std::deque<PacketJob> build_jobs(SpaceContext& ctx,
                                        const EigenComponent& comp,
                                        long prec) {
  std::deque<PacketJob> jobs;
  for (auto& pkt : eigenpackets(ctx, comp, prec)) {
    PacketJob job;
    job.pkt = std::move(pkt);
    jobs.push_back(std::move(job));
  }
  for (auto& job : jobs) {
    job.ev = std::make_unique<LFunEvaluator>(ctx, job.pkt);
    job.nu = normalization_shift(ctx, job.pkt);
  }
  return jobs;
}

/// Process one Galois orbit (a matched pair of star-parity copies) at a
/// fixed working precision. Throws PrecisionError to request escalation.
inline std::vector<LInvariantRecord> process_orbit(
    SpaceContext& ctx, const RunConfig& cfg, const EigenComponent& plus,
    const EigenComponent& minus, const std::string& component_id, long prec,
    long B) {
  long k = ctx.weight();
  long p = cfg.p;
  if (plus.ap_sign != minus.ap_sign || plus.w_sign != minus.w_sign)
    throw ComputationError("orbit: parity copies disagree on signs");

  auto discs = admissible_discriminants(cfg.N, p, plus.ap_sign, plus.w_sign,
                                        k, cfg.twist_bound);
  if (discs.empty())
    throw SearchExhausted("orbit: no admissible twist discriminant");

  std::map<int, std::deque<PacketJob>> jobs_by_parity;
  auto jobs_for = [&](int eps) -> std::deque<PacketJob>& {
    auto it = jobs_by_parity.find(eps);
    if (it != jobs_by_parity.end()) return it->second;
    const EigenComponent& c = (eps > 0) ? plus : minus;
    return jobs_by_parity.emplace(eps, build_jobs(ctx, c, prec)).first->second;
  };

  // twist search: smallest admissible |D| with nonvanishing central values
  const Rat thresh_base = Rat(floor_log(k - 1, p));
  std::optional<TwistContext> chosen;
  int chosen_eps = 0;
  std::vector<LocalFieldElement> centrals;
  for (const Int& D : discs) {
    TwistContext tw = make_twist_context(D);
    int eps = central_parity(k, tw);
    auto& jobs = jobs_for(eps);
    centrals.clear();
    bool ok = true;
    for (auto& job : jobs) {
      LocalFieldElement cv = job.ev->central_value(tw);
      if (cv.is_certified_zero()) {
        ok = false;
        break;
      }
      centrals.push_back(cv);
    }
    if (ok) {
      chosen = tw;
      chosen_eps = eps;
      break;
    }
  }
  if (!chosen)
    throw SearchExhausted(
        "orbit: central value vanished for every admissible twist (precision "
        "or bug)");

  auto& jobs = jobs_for(chosen_eps);
  std::vector<LInvariantRecord> out;
  for (size_t pi = 0; pi < jobs.size(); ++pi) {
    PacketJob& job = jobs[pi];
    LInvariantRecord rec;
    rec.p = p;
    rec.N = cfg.N;
    rec.k = k;
    rec.ap_sign = plus.ap_sign;
    rec.w_sign = plus.w_sign;
    rec.D = chosen->D;
    rec.component = component_id;
    rec.packet = static_cast<long>(pi);
    rec.multiplicity = job.pkt.multiplicity;
    rec.nu = job.nu;

    auto vinf = centrals[pi].valuation();
    if (!vinf) throw PrecisionError("orbit: central valuation undetermined");
    rec.vLinfty = *vinf;

    // exceptional-zero vanishing: after twisting a_p(f_chi) is positive, so
    // the exact Riemann sum for L_p(f_chi, k/2) must be indistinguishable
    // from zero
    LocalFieldElement ez = job.ev->exceptional_zero_sum(*chosen, 1);
    if (!ez.is_certified_zero())
      throw ComputationError("orbit: exceptional-zero sum not zero");

    bool emitted = false;
    for (long n = 1; n <= cfg.n_max; ++n) {
      DerivativeEstimate est = job.ev->derivative_estimate(*chosen, n, job.nu);
      Rat threshold = Rat(n * k) / 2 - thresh_base;
      threshold.canonicalize();
      if (est.value.is_certified_zero()) {
        Rat floor_prec = Rat(est.value.min_abs_prec());
        if (floor_prec <= rec.nu + threshold)
          throw PrecisionError("orbit: estimate indistinguishable from zero");
        continue;  // v(L') provably at/above the certificate line: deepen n
      }
      auto v1 = est.value.valuation();
      if (!v1) throw PrecisionError("orbit: estimate valuation undetermined");
      rec.has_vL = true;
      rec.vL1 = *v1;
      rec.vL = rec.vL1 - rec.vLinfty;
      rec.n_used = n;
      if (rec.vL1 - rec.nu < threshold) {
        rec.bound_ok = true;
        emitted = true;
        break;
      }
    }
    if (!emitted) {
      rec.bound_ok = false;
      rec.n_used = cfg.n_max;
    }
    out.push_back(std::move(rec));
  }

  // residual eigensystems (packet order matches records)
  for (size_t pi = 0; pi < jobs.size(); ++pi) {
    auto sys = residual_eigensystem(ctx, jobs[pi].pkt, B);
    out[pi].residues = sys.canonical;
  }
  return out;
}

/// Match each plus-parity component with its minus-parity copy by comparing
/// Hecke charpolys at increasing primes.
inline std::vector<std::pair<const EigenComponent*, const EigenComponent*>>
match_orbits(SpaceContext& ctx, std::vector<EigenComponent>& plus,
             std::vector<EigenComponent>& minus) {
  std::vector<std::pair<const EigenComponent*, const EigenComponent*>> out;
  std::vector<bool> used(minus.size(), false);
  for (auto& cp : plus) {
    std::vector<long> cands;
    for (size_t j = 0; j < minus.size(); ++j)
      if (!used[j] && minus[j].dim == cp.dim &&
          minus[j].ap_sign == cp.ap_sign && minus[j].w_sign == cp.w_sign)
        cands.push_back(static_cast<long>(j));
    long ell = 2;
    while (cands.size() > 1 && ell <= 200) {
      if (ctx.level() % ell != 0) {
        QPoly cp_poly = charpoly(restrict_operator(ctx.hecke_matrix(ell), cp.A));
        std::vector<long> keep;
        for (long j : cands) {
          QPoly mp = charpoly(restrict_operator(ctx.hecke_matrix(ell),
                                                minus[j].A));
          if (mp == cp_poly) keep.push_back(j);
        }
        cands = keep;
      }
      ell = next_prime(ell);
    }
    if (cands.size() != 1)
      throw ComputationError("match_orbits: cross-parity matching failed");
    used[cands[0]] = true;
    out.push_back({&cp, &minus[cands[0]]});
  }
  return out;
}

}  // namespace detail

/// Compute all records of one weight. Component failures are logged and
/// skipped; the weight itself always completes.
inline WeightOutcome process_weight(const RunConfig& cfg, long k) {
  WeightOutcome outcome;
  outcome.k = k;
  long M = cfg.N * cfg.p;
  try {
    SpaceContext ctx(M, k);
    if (ctx.cuspidal_new_subspace(cfg.p).dim() == 0) return outcome;
    auto plus = decompose(ctx, cfg.p, +1);
    auto minus = decompose(ctx, cfg.p, -1);
    auto orbits = detail::match_orbits(ctx, plus, minus);
    long B = cfg.sturm_bound();
    for (size_t oi = 0; oi < orbits.size(); ++oi) {
      std::string cid = "c" + std::to_string(oi);
      long prec = cfg.initial_precision(k);
      bool done = false;
      for (int attempt = 0; attempt < 4 && !done; ++attempt) {
        try {
          auto recs = detail::process_orbit(ctx, cfg, *orbits[oi].first,
                                            *orbits[oi].second, cid, prec, B);
          for (auto& r : recs) outcome.records.push_back(std::move(r));
          done = true;
        } catch (const PrecisionError&) {
          prec *= 2;
        }
      }
      if (!done)
        outcome.errors.push_back(
            cid + ": working precision escalation exhausted");
    }
  } catch (const std::exception& e) {
    outcome.errors.push_back(std::string("weight failed: ") + e.what());
  }
  return outcome;
}

/// Assign residual class ids across a full record set (stable under resume:
/// ids follow the lexicographic order of canonical eigensystem strings).
inline void assign_residual_classes(std::vector<LInvariantRecord>& records) {
  std::map<std::string, long> ids;
  for (auto& r : records)
    if (!r.residues.empty()) ids.emplace(r.residues, 0);
  long next = 0;
  for (auto& [s, id] : ids) id = next++;
  for (auto& r : records)
    r.residual_class_id = r.residues.empty() ? -1 : ids[r.residues];
}

struct Dataset {
  nlohmann::json header;
  std::vector<LInvariantRecord> records;
  std::vector<std::pair<long, std::string>> errors;  // (k, message)
  std::vector<long> checkpointed_weights;
};

inline nlohmann::json config_header(const RunConfig& cfg) {
  nlohmann::json h;
  h["format"] = 1;
  h["type"] = "header";
  h["p"] = cfg.p;
  h["N"] = cfg.N;
  h["k_min"] = cfg.k_min;
  h["k_max"] = cfg.k_max;
  h["precision_guard"] = cfg.precision_guard;
  h["twist_bound"] = cfg.twist_bound;
  h["n_max"] = cfg.n_max;
  h["residual_bound"] = cfg.sturm_bound();
  return h;
}

inline void write_dataset(const std::string& path, const RunConfig& cfg,
                          const std::vector<WeightOutcome>& outcomes) {
  std::ofstream out(path);
  if (!out) throw ComputationError("cannot open output file: " + path);
  nlohmann::json h = config_header(cfg);
  auto now = std::chrono::system_clock::now().time_since_epoch();
  h["generated_at"] =
      std::chrono::duration_cast<std::chrono::seconds>(now).count();
  out << h.dump() << "\n";
  for (const auto& w : outcomes) {
    for (const auto& r : w.records) out << r.to_json().dump() << "\n";
    for (const auto& e : w.errors) {
      nlohmann::json j;
      j["type"] = "error";
      j["k"] = w.k;
      j["what"] = e;
      out << j.dump() << "\n";
    }
    nlohmann::json c;
    c["type"] = "checkpoint";
    c["k"] = w.k;
    c["records"] = w.records.size();
    out << c.dump() << "\n";
  }
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ComputationError("cannot open dataset: " + path);
  Dataset ds;
  std::string line;
  std::vector<LInvariantRecord> pending;
  std::vector<std::pair<long, std::string>> pending_errors;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    std::string type = j.value("type", "record");
    if (type == "header") {
      ds.header = j;
    } else if (type == "record") {
      pending.push_back(LInvariantRecord::from_json(j));
    } else if (type == "error") {
      pending_errors.push_back({j.at("k").get<long>(),
                                j.at("what").get<std::string>()});
    } else if (type == "checkpoint") {
      long k = j.at("k").get<long>();
      ds.checkpointed_weights.push_back(k);
      for (auto& r : pending) ds.records.push_back(std::move(r));
      for (auto& e : pending_errors) ds.errors.push_back(e);
      pending.clear();
      pending_errors.clear();
    }
  }
  // lines after the last checkpoint belong to an incomplete weight: dropped
  return ds;
}

/// Run the sweep: returns (all outcomes, exit code 0/2). Deterministic
/// record bodies for a fixed config, resumable at weight granularity.
inline std::pair<std::vector<WeightOutcome>, int> run(const RunConfig& cfg) {
  cfg.validate();
  std::vector<long> todo;
  std::map<long, WeightOutcome> done;

  if (cfg.resume && !cfg.out_path.empty()) {
    std::ifstream probe(cfg.out_path);
    if (probe.good()) {
      Dataset old = load_dataset(cfg.out_path);
      // only reuse when the configuration matches
      nlohmann::json fresh = config_header(cfg);
      bool compatible = true;
      for (auto& key : {"p", "N", "precision_guard", "twist_bound", "n_max",
                        "residual_bound"})
        if (!old.header.contains(key) || old.header[key] != fresh[key])
          compatible = false;
      if (compatible) {
        for (long k : old.checkpointed_weights) {
          WeightOutcome w;
          w.k = k;
          done[k] = std::move(w);
        }
        for (auto& r : old.records) done[r.k].records.push_back(std::move(r));
        for (auto& [k, e] : old.errors)
          if (done.count(k)) done[k].errors.push_back(e);
      }
    }
  }

  for (long k = cfg.k_min; k <= cfg.k_max; k += 2)
    if (!done.count(k)) todo.push_back(k);

  std::mutex mtx;
  std::atomic<size_t> next{0};
  long nworkers = std::max(1L, std::min(cfg.workers,
                                        static_cast<long>(todo.size())));
  auto work = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= todo.size()) break;
      WeightOutcome w = process_weight(cfg, todo[i]);
      std::lock_guard<std::mutex> lock(mtx);
      done[w.k] = std::move(w);
    }
  };
  if (nworkers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (long t = 0; t < nworkers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<WeightOutcome> outcomes;
  for (long k = cfg.k_min; k <= cfg.k_max; k += 2) {
    auto it = done.find(k);
    if (it != done.end()) outcomes.push_back(std::move(it->second));
  }

  // residual classes across the whole dataset
  std::vector<LInvariantRecord*> all;
  for (auto& w : outcomes)
    for (auto& r : w.records) all.push_back(&r);
  {
    std::map<std::string, long> ids;
    for (auto* r : all)
      if (!r->residues.empty()) ids.emplace(r->residues, 0);
    long nid = 0;
    for (auto& [s, id] : ids) id = nid++;
    for (auto* r : all)
      r->residual_class_id = r->residues.empty() ? -1 : ids[r->residues];
  }

  int exit_code = 0;
  for (auto& w : outcomes)
    if (!w.errors.empty()) exit_code = 2;

  if (!cfg.out_path.empty()) {
    write_dataset(cfg.out_path, cfg, outcomes);
    // sidecar class table
    std::map<std::string, std::pair<long, long>> table;  // canon -> (id, count)
    for (auto& w : outcomes)
      for (auto& r : w.records) {
        auto& entry = table[r.residues];
        entry.first = r.residual_class_id;
        entry.second += r.multiplicity;
      }
    nlohmann::json arr = nlohmann::json::array();
    for (auto& [canon, idc] : table) {
      nlohmann::json e;
      e["id"] = idc.first;
      e["eigensystem"] = canon;
      e["total_multiplicity"] = idc.second;
      arr.push_back(e);
    }
    std::ofstream side(cfg.out_path + ".classes.json");
    side << arr.dump(2) << "\n";
  }
  return {std::move(outcomes), exit_code};
}

}  // namespace linv
