#include "tensilex/scorer.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace tensilex {

std::string_view to_string(Scale scale) noexcept {
  return scale == Scale::Stress ? "stress" : "relaxation";
}

std::string_view to_string(ContributionSource source) noexcept {
  switch (source) {
    case ContributionSource::StressTerm: return "StressTerm";
    case ContributionSource::RelaxTerm: return "RelaxTerm";
    case ContributionSource::Idiom: return "Idiom";
    case ContributionSource::Emoticon: return "Emoticon";
    case ContributionSource::NegatedRelax: return "NegatedRelax";
    case ContributionSource::NegatedStress: return "NegatedStress";
  }
  return "Unknown";
}

namespace {

int clamp_strength(int s) noexcept { return std::clamp(s, kMinStrength, kMaxStrength); }

bool has_bang(const Token& t) noexcept {
  return t.is_punct_run && t.raw.find('!') != std::string::npos;
}

std::string join_raw(const Sentence& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.raw;
  }
  return out;
}

struct IdiomCandidate {
  std::size_t start;
  std::size_t length;
  std::size_t idiom;
};

}  // namespace

Scorer::Scorer(LexiconSet lexicon)
    : lexicon_(std::move(lexicon)),
      recognised_(lexicon_.recognised_words()),
      stress_index_(lexicon_.stress_terms),
      relax_index_(lexicon_.relax_terms) {
  for (const auto& b : lexicon_.boosters) boosters_.emplace(b.word, b.delta);
  for (std::size_t i = 0; i < lexicon_.emoticons.size(); ++i) {
    emoticons_.emplace(lexicon_.emoticons[i].glyph, i);
  }
}

SentencePlan Scorer::plan_sentence(const Sentence& tokens) const {
  SentencePlan plan;
  const std::size_t n = tokens.size();
  std::vector<bool> masked(n, false);

  // Idioms: longest first, then leftmost; accepted spans never overlap.
  std::vector<IdiomCandidate> candidates;
  for (std::size_t d = 0; d < lexicon_.idioms.size(); ++d) {
    const auto& words = lexicon_.idioms[d].tokens;
    if (words.size() > n) continue;
    for (std::size_t s = 0; s + words.size() <= n; ++s) {
      bool hit = true;
      for (std::size_t k = 0; k < words.size() && hit; ++k) {
        hit = tokens[s + k].normalized == words[k];
      }
      if (hit) candidates.push_back({s, words.size(), d});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::tie(b.length, a.start, a.idiom) < std::tie(a.length, b.start, b.idiom);
  });
  for (const auto& c : candidates) {
    const auto first = masked.begin() + static_cast<std::ptrdiff_t>(c.start);
    const auto last = first + static_cast<std::ptrdiff_t>(c.length);
    if (std::any_of(first, last, [](bool m) { return m; })) continue;
    std::fill(first, last, true);
    plan.matches.push_back({c.start, ContributionSource::Idiom, c.idiom, 0, 0, false});
  }

  const auto is_word = [&](std::size_t j) {
    return !masked[j] && !tokens[j].is_punct_run;
  };
  const auto is_negator = [&](std::size_t j) {
    return is_word(j) && lexicon_.negators.count(tokens[j].normalized) != 0;
  };
  const auto booster_at = [&](std::size_t j) -> int {
    if (!is_word(j)) return 0;
    const auto it = boosters_.find(tokens[j].normalized);
    return it == boosters_.end() ? 0 : it->second;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = tokens[i];
    plan.has_exclamation = plan.has_exclamation || has_bang(t);
    if (masked[i]) continue;
    if (t.is_punct_run) {
      if (const auto it = emoticons_.find(t.raw); it != emoticons_.end()) {
        plan.matches.push_back({i, ContributionSource::Emoticon, it->second, 0, 0, false});
      }
      continue;
    }
    if (t.normalized == kUrlToken) continue;

    // Booster: the nearest preceding token that is not a negator.
    int delta = 0;
    if (i >= 1) {
      const std::size_t j = i - 1;
      if (!is_negator(j)) {
        delta = booster_at(j);
      } else if (j >= 1) {
        delta = booster_at(j - 1);
      }
    }
    // Negator: the preceding token, optionally skipping one booster.
    bool negated = false;
    if (i >= 1) {
      const std::size_t j = i - 1;
      if (is_negator(j)) {
        negated = true;
      } else if (booster_at(j) != 0 && j >= 1) {
        negated = is_negator(j - 1);
      }
    }
    const int repeat = t.letters_removed >= 2 ? 1 : 0;

    if (const auto e = stress_index_.find(t.normalized)) {
      plan.matches.push_back({i, ContributionSource::StressTerm, *e, delta, repeat, negated});
    }
    if (const auto e = relax_index_.find(t.normalized)) {
      plan.matches.push_back({i, ContributionSource::RelaxTerm, *e, delta, repeat, negated});
    }
  }

  std::stable_sort(plan.matches.begin(), plan.matches.end(),
                   [](const auto& a, const auto& b) { return a.token_index < b.token_index; });
  return plan;
}

TextPlan Scorer::plan_text(std::string_view text) const {
  TextPlan plan;
  plan.tokens = process(text, recognised_);
  plan.sentences.reserve(plan.tokens.sentences.size());
  for (const auto& sentence : plan.tokens.sentences) {
    plan.sentences.push_back(plan_sentence(sentence));
  }
  return plan;
}

DualScore Scorer::evaluate(const SentencePlan& plan, const LexiconSet& strengths,
                           const Sentence* tokens, SentenceTrace* trace) {
  int stress = kMinStrength;
  int relax = kMinStrength;

  for (const auto& m : plan.matches) {
    TermContribution c;
    c.token_index = m.token_index;
    c.source = m.source;
    const std::string* matched = nullptr;
    PhraseKind kind = PhraseKind::Neutral;

    switch (m.source) {
      case ContributionSource::Idiom: {
        const auto& idiom = strengths.idioms[m.entry];
        kind = idiom.kind;
        c.base_strength = c.final_strength = idiom.strength;
        if (trace != nullptr) c.matched = idiom.phrase();
        break;
      }
      case ContributionSource::Emoticon: {
        const auto& emo = strengths.emoticons[m.entry];
        kind = emo.kind;
        c.base_strength = c.final_strength = emo.strength;
        matched = &emo.glyph;
        break;
      }
      case ContributionSource::StressTerm:
      case ContributionSource::RelaxTerm: {
        const bool is_stress = m.source == ContributionSource::StressTerm;
        const auto& entry =
            (is_stress ? strengths.stress_terms : strengths.relax_terms)[m.entry];
        matched = &entry.pattern;
        c.base_strength = entry.strength;
        c.booster_delta = m.booster_delta;
        c.repeat_boost = m.repeat_boost;
        c.final_strength = clamp_strength(entry.strength + m.booster_delta + m.repeat_boost);
        kind = is_stress ? PhraseKind::Stress : PhraseKind::Relaxation;
        if (m.negated) {
          if (is_stress) {
            c.source = ContributionSource::NegatedStress;
            c.final_strength = kMinStrength;
          } else {
            c.source = ContributionSource::NegatedRelax;
            kind = PhraseKind::Stress;
          }
        }
        break;
      }
      case ContributionSource::NegatedRelax:
      case ContributionSource::NegatedStress:
        break;
    }

    if (trace != nullptr) {
      if (matched != nullptr) c.matched = *matched;
      if (tokens != nullptr && m.token_index < tokens->size()) c.token = (*tokens)[m.token_index].raw;
    }
    if (kind == PhraseKind::Neutral) {
      if (trace != nullptr) trace->neutral_matches.push_back(c.matched);
      continue;
    }
    c.scale = kind == PhraseKind::Stress ? Scale::Stress : Scale::Relaxation;
    if (c.scale == Scale::Stress) {
      stress = std::max(stress, c.final_strength);
    } else {
      relax = std::max(relax, c.final_strength);
    }
    if (trace != nullptr) trace->contributions.push_back(std::move(c));
  }

  bool stress_boosted = false;
  bool relax_boosted = false;
  if (plan.has_exclamation) {
    if (stress >= 2) {
      ++stress;
      stress_boosted = true;
    }
    if (relax >= 2) {
      ++relax;
      relax_boosted = true;
    }
  }
  const DualScore score{-clamp_strength(stress), clamp_strength(relax)};

  if (trace != nullptr) {
    if (tokens != nullptr) trace->text = join_raw(*tokens);
    trace->has_exclamation = plan.has_exclamation;
    trace->stress_boosted = stress_boosted;
    trace->relax_boosted = relax_boosted;
    trace->score = score;
  }
  return score;
}

DualScore Scorer::evaluate(const TextPlan& plan, const LexiconSet& strengths, ScoreTrace* trace) {
  DualScore total;
  for (std::size_t s = 0; s < plan.sentences.size(); ++s) {
    SentenceTrace* sentence_trace = nullptr;
    if (trace != nullptr) sentence_trace = &trace->sentences.emplace_back();
    const Sentence* tokens =
        s < plan.tokens.sentences.size() ? &plan.tokens.sentences[s] : nullptr;
    const auto score = evaluate(plan.sentences[s], strengths, tokens, sentence_trace);
    total.stress = std::min(total.stress, score.stress);
    total.relaxation = std::max(total.relaxation, score.relaxation);
  }
  if (trace != nullptr) trace->score = total;
  return total;
}

ScoredText Scorer::score_text(std::string_view text) const {
  ScoredText out;
  const auto plan = plan_text(text);
  out.score = evaluate(plan, lexicon_, &out.trace);
  return out;
}

DualScore Scorer::score_sentence(const Sentence& tokens, SentenceTrace* trace) const {
  return evaluate(plan_sentence(tokens), lexicon_, &tokens, trace);
}

std::pair<DualScore, SentenceTrace> score_sentence(const Sentence& tokens, const LexiconSet& lex) {
  const Scorer scorer(lex);
  SentenceTrace trace;
  const auto score = scorer.score_sentence(tokens, &trace);
  return {score, std::move(trace)};
}

ScoredText score_text(std::string_view text, const LexiconSet& lex) {
  return Scorer(lex).score_text(text);
}

DualScore replay(const SentenceTrace& trace) {
  int stress = kMinStrength;
  int relax = kMinStrength;
  for (const auto& c : trace.contributions) {
    const int strength = c.source == ContributionSource::NegatedStress
                             ? kMinStrength
                             : clamp_strength(c.base_strength + c.booster_delta + c.repeat_boost);
    int& slot = c.scale == Scale::Stress ? stress : relax;
    slot = std::max(slot, strength);
  }
  if (trace.stress_boosted) ++stress;
  if (trace.relax_boosted) ++relax;
  return {-clamp_strength(stress), clamp_strength(relax)};
}

DualScore replay(const ScoreTrace& trace) {
  DualScore total;
  for (const auto& s : trace.sentences) {
    const auto score = replay(s);
    total.stress = std::min(total.stress, score.stress);
    total.relaxation = std::max(total.relaxation, score.relaxation);
  }
  return total;
}

namespace {

std::string signed_int(int v) { return (v >= 0 ? "+" : "") + std::to_string(v); }

}  // namespace

std::string render_trace(const ScoreTrace& trace) {
  std::ostringstream out;
  out << "score: stress " << trace.score.stress << " relaxation " << trace.score.relaxation << '\n';
  for (std::size_t s = 0; s < trace.sentences.size(); ++s) {
    const auto& st = trace.sentences[s];
    out << "sentence " << s + 1 << ": \"" << st.text << "\" -> stress " << st.score.stress
        << " relaxation " << st.score.relaxation << '\n';
    for (const auto& c : st.contributions) {
      out << "  [" << c.token_index << "] " << to_string(c.source) << " '" << c.token
          << "' matches '" << c.matched << "': base " << c.base_strength;
      if (c.booster_delta != 0) out << ", booster " << signed_int(c.booster_delta);
      if (c.repeat_boost != 0) out << ", repeated letters +" << c.repeat_boost;
      if (c.source == ContributionSource::NegatedStress) out << ", negated to neutral";
      if (c.source == ContributionSource::NegatedRelax) out << ", negated into stress";
      out << " -> " << to_string(c.scale) << ' ' << c.final_strength << '\n';
    }
    for (const auto& m : st.neutral_matches) out << "  neutral match '" << m << "'\n";
    if (st.stress_boosted) out << "  ExclamationBoost: stress +1\n";
    if (st.relax_boosted) out << "  ExclamationBoost: relaxation +1\n";
  }
  return out.str();
}

std::string explain(std::string_view text, const LexiconSet& lex) {
  return render_trace(score_text(text, lex).trace);
}

}  // namespace tensilex
