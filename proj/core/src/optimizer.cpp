#include "tensilex/optimizer.hpp"

#include <algorithm>
#include <ostream>

#include "tensilex/error.hpp"
#include "tensilex/rng.hpp"

namespace tensilex {

void OptimizerConfig::validate() const {
  if (min_improvement < 1) throw Error(ErrorCode::RangeError, "min_improvement must be >= 1");
  if (max_passes < 1) throw Error(ErrorCode::RangeError, "max_passes must be >= 1");
}

std::vector<PreparedExample> prepare_corpus(const Scorer& scorer,
                                            std::span<const AnnotatedExample> corpus) {
  std::vector<PreparedExample> out;
  out.reserve(corpus.size());
  for (const auto& ex : corpus) out.push_back({scorer.plan_text(ex.text), ex.gold()});
  return out;
}

std::int64_t total_absolute_error(const LexiconSet& lex, std::span<const AnnotatedExample> corpus) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");
  const Scorer scorer(lex);
  std::int64_t total = 0;
  for (const auto& ex : corpus) total += absolute_error(scorer.score_text(ex.text).score, ex.gold());
  return total;
}

namespace {

struct TermRef {
  AffectKind kind;
  std::size_t index;
};

std::size_t slot_of(const TermRef& t, std::size_t stress_count) noexcept {
  return t.kind == AffectKind::Stress ? t.index : stress_count + t.index;
}

}  // namespace

OptimizationResult hill_climb(const LexiconSet& lex, std::span<const PreparedExample* const> corpus,
                              const OptimizerConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");

  OptimizationResult result{lex, {}};
  LexiconSet& work = result.lexicon;
  OptimizationReport& report = result.report;
  report.seed = cfg.seed;
  report.min_improvement = cfg.min_improvement;

  const std::size_t stress_count = work.stress_terms.size();
  std::vector<TermRef> order;
  order.reserve(stress_count + work.relax_terms.size());
  for (std::size_t i = 0; i < stress_count; ++i) order.push_back({AffectKind::Stress, i});
  for (std::size_t i = 0; i < work.relax_terms.size(); ++i) order.push_back({AffectKind::Relaxation, i});

  // Which examples each term can influence; only those are re-scored.
  std::vector<std::vector<std::size_t>> users(order.size());
  for (std::size_t e = 0; e < corpus.size(); ++e) {
    for (const auto& sentence : corpus[e]->plan.sentences) {
      for (const auto& m : sentence.matches) {
        if (m.source != ContributionSource::StressTerm && m.source != ContributionSource::RelaxTerm) {
          continue;
        }
        const AffectKind kind =
            m.source == ContributionSource::StressTerm ? AffectKind::Stress : AffectKind::Relaxation;
        auto& list = users[slot_of({kind, m.entry}, stress_count)];
        if (list.empty() || list.back() != e) list.push_back(e);
      }
    }
  }

  std::vector<std::int64_t> errors(corpus.size());
  std::int64_t total = 0;
  for (std::size_t e = 0; e < corpus.size(); ++e) {
    errors[e] = absolute_error(Scorer::evaluate(corpus[e]->plan, work), corpus[e]->gold);
    total += errors[e];
  }
  report.initial_error = total;

  std::vector<std::int64_t> candidate_errors;
  // Applies `strength` to `term`; keeps it if the error falls far enough.
  const auto attempt = [&](const TermRef& term, int strength) -> bool {
    auto& entry = work.terms(term.kind)[term.index];
    const int old = entry.strength;
    if (strength == old || strength < kMinStrength || strength > kMaxStrength) return false;
    const auto& affected = users[slot_of(term, stress_count)];
    if (affected.empty()) return false;

    entry.strength = strength;
    candidate_errors.resize(affected.size());
    std::int64_t candidate = total;
    for (std::size_t k = 0; k < affected.size(); ++k) {
      const std::size_t e = affected[k];
      candidate_errors[k] = absolute_error(Scorer::evaluate(corpus[e]->plan, work), corpus[e]->gold);
      candidate += candidate_errors[k] - errors[e];
    }
    if (total - candidate < cfg.min_improvement) {
      entry.strength = old;
      return false;
    }
    for (std::size_t k = 0; k < affected.size(); ++k) errors[affected[k]] = candidate_errors[k];
    report.changes.push_back({report.passes_run, term.kind, entry.pattern, old, strength, total,
                              candidate});
    total = candidate;
    return true;
  };

  rng::Engine engine(cfg.seed);
  while (report.passes_run < cfg.max_passes) {
    ++report.passes_run;
    rng::shuffle(std::span<TermRef>(order), engine);
    int changes = 0;
    for (const auto& term : order) {
      const int current = work.terms(term.kind)[term.index].strength;
      if (attempt(term, current + 1) || attempt(term, current - 1)) ++changes;
    }
    report.passes.push_back({report.passes_run, order.size(), changes, total});
    report.changes_made += changes;
    if (changes == 0) {
      report.converged = true;
      break;
    }
  }
  report.final_error = total;
  return result;
}

OptimizationResult hill_climb(const LexiconSet& lex, std::span<const AnnotatedExample> corpus,
                              const OptimizerConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");
  const Scorer scorer(lex);
  const auto prepared = prepare_corpus(scorer, corpus);
  std::vector<const PreparedExample*> views;
  views.reserve(prepared.size());
  for (const auto& p : prepared) views.push_back(&p);
  return hill_climb(lex, std::span<const PreparedExample* const>(views), cfg);
}

void write_report(const OptimizationReport& report, std::ostream& out) {
  out << "seed\t" << report.seed << '\n'
      << "min_improvement\t" << report.min_improvement << '\n'
      << "term_order\treshuffled_each_pass\n"
      << "initial_error\t" << report.initial_error << '\n'
      << "final_error\t" << report.final_error << '\n'
      << "passes_run\t" << report.passes_run << '\n'
      << "changes_made\t" << report.changes_made << '\n'
      << "converged\t" << (report.converged ? "true" : "false") << '\n'
      << '\n'
      << "pass\tterms_visited\tchanges\terror_after\n";
  for (const auto& p : report.passes) {
    out << p.pass << '\t' << p.terms_visited << '\t' << p.changes << '\t' << p.error_after << '\n';
  }
  out << '\n' << "pass\tkind\tpattern\told_strength\tnew_strength\terror_before\terror_after\n";
  for (const auto& c : report.changes) {
    out << c.pass << '\t' << to_string(c.kind) << '\t' << c.pattern << '\t' << c.old_strength << '\t'
        << c.new_strength << '\t' << c.error_before << '\t' << c.error_after << '\n';
  }
}

}  // namespace tensilex
