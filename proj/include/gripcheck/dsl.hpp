// Text format for specification documents (.gspec): a line-oriented keyword
// grammar with one requirement per `req ... end` block. Parsing is total:
// any input yields either a document or a list of positioned errors, and
// print -> parse is the identity on the document model.
//
// The grammar (EBNF) is documented in docs/dsl-grammar.md.
#pragma once

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gripcheck/spec_model.hpp"

namespace gripcheck {

struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;

  bool operator==(const ParseError&) const = default;
};

struct ParseResult {
  std::optional<SpecificationDoc> doc;
  std::vector<ParseError> errors;

  bool ok() const { return doc.has_value() && errors.empty(); }
};

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace dsl_detail {

enum class TokKind { Word, Number, String, LBracket, RBracket, Comma, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;    // word spelling or unescaped string contents
  double number = 0.0;
  SourceSpan span;
};

inline bool word_char(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '/' || c == '^';
}

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;
  std::vector<ParseError>* errors;

  explicit Lexer(std::string_view s, std::vector<ParseError>* errs) : src(s), errors(errs) {}

  void advance() {
    if (pos < src.size()) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip_space_and_comments() {
    while (pos < src.size()) {
      unsigned char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (std::isspace(c)) {
        advance();
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_space_and_comments();
    Token t;
    t.span = {line, col, 1};
    if (pos >= src.size()) {
      t.kind = TokKind::End;
      return t;
    }
    unsigned char c = src[pos];
    if (c == '[') {
      t.kind = TokKind::LBracket;
      advance();
      return t;
    }
    if (c == ']') {
      t.kind = TokKind::RBracket;
      advance();
      return t;
    }
    if (c == ',') {
      t.kind = TokKind::Comma;
      advance();
      return t;
    }
    if (c == '"') {
      advance();
      std::string out;
      bool closed = false;
      while (pos < src.size()) {
        char ch = src[pos];
        if (ch == '"') {
          advance();
          closed = true;
          break;
        }
        if (ch == '\n') break;  // strings do not span lines
        if (ch == '\\' && pos + 1 < src.size()) {
          advance();
          char esc = src[pos];
          switch (esc) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            default: out.push_back(esc); break;
          }
          advance();
        } else {
          out.push_back(ch);
          advance();
        }
      }
      if (!closed)
        errors->push_back({t.span, "unterminated string literal", {"closing '\"'"}});
      t.kind = TokKind::String;
      t.text = std::move(out);
      t.span.length = int(col - t.span.column);
      return t;
    }
    if (word_char(c)) {
      std::size_t start = pos;
      while (pos < src.size() && word_char(static_cast<unsigned char>(src[pos]))) advance();
      t.text = std::string(src.substr(start, pos - start));
      t.span.length = int(t.text.size());
      // A token is a number only if the whole spelling parses as one; "1/m"
      // and "RQ1.5" stay words.
      double v = 0.0;
      const char* b = t.text.data();
      const char* e = b + t.text.size();
      auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec == std::errc{} && ptr == e) {
        t.kind = TokKind::Number;
        t.number = v;
      } else {
        t.kind = TokKind::Word;
      }
      return t;
    }
    // Unknown byte: report once and skip it.
    errors->push_back({t.span, "unexpected character", {}});
    advance();
    return next();
  }
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

inline const char* const kClauseKeywords[] = {"category", "kind",   "signal", "in",
                                              "max",      "min",    "within", "for",
                                              "fraction", "window", "phase",  "item",
                                              "method",   "text"};

inline bool is_clause_keyword(std::string_view w) {
  for (const char* k : kClauseKeywords)
    if (w == k) return true;
  return false;
}

struct Interval {
  Quantity lo, hi;
  SourceSpan span;
};

// Everything a `req` block may state, collected before kind-specific assembly.
struct ReqDraft {
  std::string id;
  SourceSpan span;
  std::optional<Category> category;
  std::optional<ReqKind> kind;
  std::optional<std::string> signal_word;
  SourceSpan signal_span;
  std::optional<Interval> in_interval;
  std::vector<std::pair<std::string, Quantity>> max_clauses;
  std::vector<std::pair<std::string, Quantity>> min_clauses;
  std::optional<Quantity> within;
  std::optional<Quantity> for_qty;
  std::optional<Interval> for_interval;
  std::optional<double> fraction;
  std::optional<SampleWindow> window;
  std::optional<Interval> window_baseline;
  std::optional<Interval> window_final;
  std::optional<Phase> phase;
  Applicability applicability;
  std::vector<VerificationMethod> methods;
  std::optional<std::string> text;
};

struct Parser {
  Lexer lex;
  Token tok;
  std::vector<ParseError>& errors;

  Parser(std::string_view src, std::vector<ParseError>& errs) : lex(src, &errs), errors(errs) {
    tok = lex.next();
  }

  void bump() { tok = lex.next(); }

  void error_here(std::string msg, std::vector<std::string> expected = {}) {
    errors.push_back({tok.span, std::move(msg), std::move(expected)});
  }

  bool at_word(std::string_view w) const { return tok.kind == TokKind::Word && tok.text == w; }

  // Skips until the next requirement boundary so one bad clause does not
  // swallow the rest of the document.
  void recover_to_boundary() {
    while (tok.kind != TokKind::End && !at_word("req") && !at_word("end") &&
           !(tok.kind == TokKind::Word && is_clause_keyword(tok.text))) {
      bump();
    }
  }

  std::optional<Quantity> parse_quantity(bool unit_required, Dimension want) {
    if (tok.kind != TokKind::Number) {
      error_here("expected a number", {"number"});
      return std::nullopt;
    }
    double v = tok.number;
    SourceSpan num_span = tok.span;
    bump();
    if (tok.kind == TokKind::Word) {
      if (auto u = parse_unit(tok.text)) {
        Quantity q{v, *u};
        if (want != Dimension::Scalar && q.dimension() != want) {
          errors.push_back({tok.span, "unit '" + tok.text + "' has the wrong dimension here", {}});
          bump();
          return std::nullopt;
        }
        bump();
        return q;
      }
      if (unit_required && !is_clause_keyword(tok.text) && tok.text != "end" && tok.text != "req") {
        errors.push_back({tok.span, "unknown unit '" + tok.text + "'", {"unit"}});
        bump();
        return std::nullopt;
      }
    }
    if (unit_required) {
      errors.push_back(
          {num_span, "physical literal requires a unit", {"unit such as 'psi', 'N', 'mm'"}});
      return std::nullopt;
    }
    return scalar(v);
  }

  std::optional<Interval> parse_interval() {
    if (tok.kind != TokKind::LBracket) {
      error_here("expected '['", {"'['"});
      return std::nullopt;
    }
    SourceSpan span = tok.span;
    bump();
    auto lo = parse_quantity(true, Dimension::Scalar);
    if (tok.kind == TokKind::Comma)
      bump();
    else
      error_here("expected ',' between interval bounds", {"','"});
    auto hi = parse_quantity(true, Dimension::Scalar);
    if (tok.kind == TokKind::RBracket)
      bump();
    else
      error_here("expected ']'", {"']'"});
    if (!lo || !hi) return std::nullopt;
    if (lo->dimension() != hi->dimension()) {
      errors.push_back({span, "interval bounds have mixed dimensions", {}});
      return std::nullopt;
    }
    if (lo->si() > hi->si()) {
      errors.push_back({span, "empty interval: lower bound exceeds upper bound", {}});
      return std::nullopt;
    }
    return Interval{*lo, *hi, span};
  }

  template <typename E, std::size_t N>
  std::optional<E> parse_name(const names::Entry<E> (&table)[N], const char* what) {
    if (tok.kind != TokKind::Word) {
      error_here(std::string("expected ") + what, {what});
      return std::nullopt;
    }
    auto v = names::from_name(table, tok.text);
    if (!v) {
      error_here("unknown " + std::string(what) + " '" + tok.text + "'", {what});
      bump();
      return std::nullopt;
    }
    bump();
    return v;
  }

  void parse_item_clause(ReqDraft& d) {
    if (tok.kind != TokKind::Word) {
      error_here("expected an item predicate after 'item'",
                 {"class", "profile", "shape", "size-ratio", "orientation"});
      return;
    }
    std::string pred = tok.text;
    bump();
    if (pred == "class") {
      std::set<ItemClass> classes = d.applicability.classes.value_or(std::set<ItemClass>{});
      bool got = false;
      while (tok.kind == TokKind::Word) {
        // DSL spells classes with hyphens; trace files use underscores.
        std::string norm = tok.text;
        for (char& c : norm)
          if (c == '-') c = '_';
        auto v = names::from_name(names::kItemClasses, norm);
        if (!v) break;
        classes.insert(*v);
        got = true;
        bump();
      }
      if (!got)
        error_here("expected at least one item class", {"soft-fragile", "hard-fragile", "..."});
      else
        d.applicability.classes = classes;
    } else if (pred == "profile") {
      if (auto v = parse_name(names::kProfiles, "fragility profile"))
        d.applicability.profile = *v;
    } else if (pred == "shape") {
      std::vector<Shape> shapes = d.applicability.shapes.value_or(std::vector<Shape>{});
      bool got = false;
      while (tok.kind == TokKind::Word) {
        auto v = names::from_name(names::kShapes, tok.text);
        if (!v) break;
        shapes.push_back(*v);
        got = true;
        bump();
      }
      if (!got)
        error_here("expected at least one shape", {"sphere", "cube", "..."});
      else
        d.applicability.shapes = shapes;
    } else if (pred == "size-ratio") {
      if (auto q = parse_quantity(false, Dimension::Scalar)) d.applicability.max_size_ratio = q->value;
    } else if (pred == "orientation") {
      if (at_word("sweep")) {
        d.applicability.orientation_sweep = true;
        bump();
      } else {
        error_here("expected 'sweep' after 'item orientation'", {"sweep"});
      }
    } else {
      error_here("unknown item predicate '" + pred + "'",
                 {"class", "profile", "shape", "size-ratio", "orientation"});
    }
  }

  // One keyword clause inside a req block. Returns false when tok does not
  // start a clause.
  bool parse_clause(ReqDraft& d) {
    if (tok.kind != TokKind::Word || !is_clause_keyword(tok.text)) return false;
    std::string kw = tok.text;
    SourceSpan kw_span = tok.span;
    bump();

    auto dup = [&](bool already) {
      if (already) errors.push_back({kw_span, "duplicate '" + kw + "' clause", {}});
      return already;
    };

    if (kw == "category") {
      bool had = d.category.has_value();
      if (auto v = parse_name(names::kCategories, "category")) {
        if (!dup(had)) d.category = *v;
      }
    } else if (kw == "kind") {
      bool had = d.kind.has_value();
      if (auto v = parse_name(names::kKinds, "kind")) {
        if (!dup(had)) d.kind = *v;
      }
    } else if (kw == "signal") {
      if (tok.kind != TokKind::Word) {
        error_here("expected a signal name", {"signal name"});
      } else if (!dup(d.signal_word.has_value())) {
        d.signal_word = tok.text;
        d.signal_span = tok.span;
        bump();
      } else {
        bump();
      }
    } else if (kw == "in") {
      bool had = d.in_interval.has_value();
      if (auto iv = parse_interval()) {
        if (!dup(had)) d.in_interval = *iv;
      }
    } else if (kw == "max" || kw == "min") {
      if (tok.kind != TokKind::Word) {
        error_here("expected a bound target after '" + kw + "'", {"signal or quantity name"});
        return true;
      }
      std::string target = tok.text;
      bump();
      bool is_signal = names::from_name(names::kSignals, target).has_value();
      bool dimensionless = (target == "residual" || target == "intercept" || target == "increase");
      if (!is_signal && !dimensionless) {
        errors.push_back({kw_span, "unknown bound target '" + target + "'", {"signal name"}});
        recover_to_boundary();
        return true;
      }
      auto q = parse_quantity(is_signal,
                              is_signal ? signal_dimension(*names::from_name(names::kSignals, target))
                                        : Dimension::Scalar);
      if (q) {
        if (kw == "max")
          d.max_clauses.emplace_back(target, *q);
        else
          d.min_clauses.emplace_back(target, *q);
      }
    } else if (kw == "within") {
      bool had = d.within.has_value();
      if (auto q = parse_quantity(true, Dimension::Time)) {
        if (!dup(had)) d.within = *q;
      }
    } else if (kw == "for") {
      if (tok.kind == TokKind::LBracket) {
        bool had = d.for_interval.has_value();
        if (auto iv = parse_interval()) {
          if (!dup(had)) d.for_interval = *iv;
        }
      } else {
        bool had = d.for_qty.has_value();
        if (auto q = parse_quantity(true, Dimension::Scalar)) {
          if (!dup(had)) d.for_qty = *q;
        }
      }
    } else if (kw == "fraction") {
      bool had = d.fraction.has_value();
      if (auto q = parse_quantity(false, Dimension::Scalar)) {
        if (q->unit != Unit::Scalar)
          errors.push_back({kw_span, "fraction takes a bare number", {}});
        else if (!dup(had))
          d.fraction = q->value;
      }
    } else if (kw == "window") {
      if (at_word("baseline") || at_word("final")) {
        bool is_baseline = tok.text == "baseline";
        bump();
        auto iv = parse_interval();
        if (iv) {
          auto& slot = is_baseline ? d.window_baseline : d.window_final;
          if (slot.has_value())
            errors.push_back({kw_span, "duplicate trend window", {}});
          else
            slot = *iv;
        }
      } else {
        bool had = d.window.has_value();
        if (auto v = parse_name(names::kWindows, "sample window")) {
          if (!dup(had)) d.window = *v;
        }
      }
    } else if (kw == "phase") {
      bool had = d.phase.has_value();
      if (auto v = parse_name(names::kPhases, "phase")) {
        if (!dup(had)) d.phase = *v;
      }
    } else if (kw == "item") {
      parse_item_clause(d);
    } else if (kw == "method") {
      if (auto v = parse_name(names::kMethods, "verification method")) {
        VerificationMethod m{*v, ""};
        if (tok.kind == TokKind::String) {
          m.detail = tok.text;
          bump();
        }
        d.methods.push_back(m);
      }
    } else if (kw == "text") {
      if (tok.kind != TokKind::String) {
        error_here("expected a quoted string after 'text'", {"string"});
      } else {
        if (!dup(d.text.has_value())) d.text = tok.text;
        bump();
      }
    }
    return true;
  }

  // ---- kind-specific assembly ----------------------------------------------

  void reject(const ReqDraft& d, bool present, const char* clause) {
    if (present)
      errors.push_back({d.span, "clause '" + std::string(clause) + "' is not valid for kind '" +
                                    std::string(to_name(*d.kind)) + "'",
                        {}});
  }

  std::optional<SignalName> required_signal(const ReqDraft& d) {
    if (!d.signal_word) {
      errors.push_back({d.span, "kind '" + std::string(to_name(*d.kind)) + "' requires a 'signal' clause",
                        {"signal"}});
      return std::nullopt;
    }
    auto v = names::from_name(names::kSignals, *d.signal_word);
    if (!v)
      errors.push_back({d.signal_span, "unknown signal '" + *d.signal_word + "'", {"signal name"}});
    return v;
  }

  std::optional<Requirement> assemble(ReqDraft& d) {
    Requirement r;
    r.id = d.id;
    if (!d.category) {
      errors.push_back({d.span, "requirement " + d.id + " is missing a 'category' clause", {"category"}});
      return std::nullopt;
    }
    r.category = *d.category;
    if (!d.kind) {
      errors.push_back({d.span, "requirement " + d.id + " is missing a 'kind' clause", {"kind"}});
      return std::nullopt;
    }
    if (d.methods.empty()) {
      errors.push_back({d.span, "requirement " + d.id + " carries no verification method", {"method"}});
      return std::nullopt;
    }
    r.methods = d.methods;
    r.applicability = d.applicability;
    r.text = d.text.value_or("");

    std::size_t errors_before = errors.size();
    switch (*d.kind) {
      case ReqKind::Range: {
        auto sig = required_signal(d);
        if (!d.in_interval) {
          errors.push_back({d.span, "range requires an 'in [lo, hi]' clause", {"in"}});
          return std::nullopt;
        }
        if (!sig) return std::nullopt;
        if (d.in_interval->lo.dimension() != signal_dimension(*sig))
          errors.push_back({d.in_interval->span, "interval unit does not match signal dimension", {}});
        RangeParams p;
        p.signal = *sig;
        p.lo = d.in_interval->lo;
        p.hi = d.in_interval->hi;
        p.window = d.window.value_or(SampleWindow::Always);
        p.phase = d.phase;
        r.params = p;
        reject(d, !d.max_clauses.empty() || !d.min_clauses.empty(), "max/min");
        reject(d, d.within.has_value(), "within");
        reject(d, d.for_qty.has_value() || d.for_interval.has_value(), "for");
        reject(d, d.fraction.has_value(), "fraction");
        break;
      }
      case ReqKind::Threshold: {
        ThresholdParams p;
        for (const auto& [target, q] : d.max_clauses) {
          auto sig = names::from_name(names::kSignals, target);
          if (!sig) {
            errors.push_back({d.span, "threshold bound target '" + target + "' is not a signal", {}});
            continue;
          }
          p.bounds.push_back({*sig, true, q});
        }
        for (const auto& [target, q] : d.min_clauses) {
          auto sig = names::from_name(names::kSignals, target);
          if (!sig) {
            errors.push_back({d.span, "threshold bound target '" + target + "' is not a signal", {}});
            continue;
          }
          p.bounds.push_back({*sig, false, q});
        }
        if (p.bounds.empty()) {
          errors.push_back({d.span, "threshold requires at least one 'max'/'min' bound", {"max", "min"}});
          return std::nullopt;
        }
        p.window = d.window.value_or(SampleWindow::Always);
        p.phase = d.phase;
        r.params = p;
        reject(d, d.in_interval.has_value(), "in");
        reject(d, d.fraction.has_value(), "fraction");
        break;
      }
      case ReqKind::EventResponse: {
        if (!d.signal_word) {
          errors.push_back({d.span, "event-response requires 'signal pump-on' or 'signal pump-off'",
                            {"signal"}});
          return std::nullopt;
        }
        auto trig = names::from_name(names::kTriggers, *d.signal_word);
        if (!trig) {
          errors.push_back({d.signal_span, "unknown trigger '" + *d.signal_word + "'",
                            {"pump-on", "pump-off"}});
          return std::nullopt;
        }
        EventResponseParams p;
        p.trigger = *trig;
        p.response_window = d.within.value_or(seconds(2.0));
        r.params = p;
        reject(d, d.fraction.has_value(), "fraction");
        break;
      }
      case ReqKind::HoldDuration: {
        if (!d.for_qty) {
          errors.push_back({d.span, "hold-duration requires 'for <duration>'", {"for"}});
          return std::nullopt;
        }
        if (d.for_qty->dimension() != Dimension::Time) {
          errors.push_back({d.span, "hold duration must be a time quantity", {}});
          return std::nullopt;
        }
        HoldDurationParams p;
        p.hold = *d.for_qty;
        p.fraction = d.fraction;
        r.params = p;
        break;
      }
      case ReqKind::SuccessRate: {
        if (!d.signal_word) {
          errors.push_back({d.span, "success-rate requires a success event signal", {"signal"}});
          return std::nullopt;
        }
        auto ev = names::from_name(names::kSuccessEvents, *d.signal_word);
        if (!ev) {
          errors.push_back({d.signal_span, "unknown success event '" + *d.signal_word + "'",
                            {"placed", "grasped", "undamaged"}});
          return std::nullopt;
        }
        if (!d.fraction) {
          errors.push_back({d.span, "success-rate requires a 'fraction' clause", {"fraction"}});
          return std::nullopt;
        }
        SuccessRateParams p;
        p.event = *ev;
        p.fraction = *d.fraction;
        if (d.for_interval) {
          if (d.for_interval->lo.dimension() != Dimension::FlowRate)
            errors.push_back({d.for_interval->span, "condition interval must be a flow range", {}});
          else
            p.flow_condition = std::pair<Quantity, Quantity>{d.for_interval->lo, d.for_interval->hi};
        }
        r.params = p;
        break;
      }
      case ReqKind::Trend: {
        if (!d.signal_word) {
          errors.push_back({d.span, "trend requires 'signal drop' or 'signal damage'", {"signal"}});
          return std::nullopt;
        }
        auto ev = names::from_name(names::kTrendEvents, *d.signal_word);
        if (!ev) {
          errors.push_back({d.signal_span, "unknown trend event '" + *d.signal_word + "'",
                            {"drop", "damage"}});
          return std::nullopt;
        }
        TrendParams p;
        p.event = *ev;
        bool have_increase = false;
        for (const auto& [target, q] : d.max_clauses) {
          if (target == "increase") {
            p.max_increase = q.value;
            have_increase = true;
          } else {
            errors.push_back({d.span, "trend supports only 'max increase'", {}});
          }
        }
        if (!have_increase) {
          errors.push_back({d.span, "trend requires 'max increase <fraction>'", {"max increase"}});
          return std::nullopt;
        }
        if (!d.window_baseline || !d.window_final) {
          errors.push_back(
              {d.span, "trend requires 'window baseline [..]' and 'window final [..]'", {"window"}});
          return std::nullopt;
        }
        if (d.window_baseline->lo.dimension() != Dimension::Time ||
            d.window_final->lo.dimension() != Dimension::Time) {
          errors.push_back({d.span, "trend windows must be time intervals", {}});
          return std::nullopt;
        }
        p.baseline_lo = d.window_baseline->lo;
        p.baseline_hi = d.window_baseline->hi;
        p.final_lo = d.window_final->lo;
        p.final_hi = d.window_final->hi;
        r.params = p;
        break;
      }
      case ReqKind::Proportionality: {
        ProportionalityParams p;
        for (const auto& [target, q] : d.max_clauses) {
          if (target == "residual")
            p.max_rel_residual = q.value;
          else if (target == "intercept")
            p.max_intercept_frac = q.value;
          else
            errors.push_back({d.span, "proportionality supports 'max residual' / 'max intercept'", {}});
        }
        if (d.in_interval) {
          if (d.in_interval->lo.dimension() != Dimension::Curvature)
            errors.push_back({d.in_interval->span, "target band must be a curvature interval", {}});
          else
            p.target_band = std::pair<Quantity, Quantity>{d.in_interval->lo, d.in_interval->hi};
        }
        if (d.for_qty) {
          if (d.for_qty->dimension() != Dimension::Pressure)
            errors.push_back({d.span, "reference point must be a pressure", {}});
          else
            p.reference_pressure = *d.for_qty;
        }
        if (!p.max_rel_residual && !p.reference_pressure) {
          errors.push_back({d.span,
                            "proportionality requires 'max residual' or a reference "
                            "'for <pressure>' with an 'in [..]' band",
                            {}});
          return std::nullopt;
        }
        r.params = p;
        break;
      }
      case ReqKind::NoCollision: {
        if (!d.signal_word) {
          errors.push_back({d.span, "no-collision requires a predicate signal", {"signal"}});
          return std::nullopt;
        }
        auto pred = names::from_name(names::kCollisionPredicates, *d.signal_word);
        if (!pred) {
          errors.push_back({d.signal_span, "unknown collision predicate '" + *d.signal_word + "'",
                            {"item-motionless", "body-clearance", "body-position-distinct",
                             "only-gripper-contact"}});
          return std::nullopt;
        }
        r.params = NoCollisionParams{*pred};
        break;
      }
      case ReqKind::Manual: {
        r.params = ManualParams{};
        reject(d, d.in_interval.has_value(), "in");
        reject(d, !d.max_clauses.empty() || !d.min_clauses.empty(), "max/min");
        reject(d, d.fraction.has_value(), "fraction");
        reject(d, d.for_qty.has_value() || d.for_interval.has_value(), "for");
        reject(d, d.within.has_value(), "within");
        break;
      }
    }
    if (errors.size() != errors_before) return std::nullopt;
    return r;
  }

  std::optional<Requirement> parse_requirement() {
    // caller consumed 'req'
    ReqDraft d;
    d.span = tok.span;
    if (tok.kind != TokKind::Word) {
      error_here("expected a requirement id after 'req'", {"identifier"});
      recover_to_boundary();
      return std::nullopt;
    }
    d.id = tok.text;
    bump();
    while (true) {
      if (tok.kind == TokKind::End || at_word("req")) break;  // implicit end
      if (at_word("end")) {
        bump();
        break;
      }
      if (!parse_clause(d)) {
        error_here("unexpected token inside requirement block",
                   {"clause keyword", "end"});
        bump();
        recover_to_boundary();
      }
    }
    return assemble(d);
  }

  SpecificationDoc parse_document() {
    SpecificationDoc doc;
    while (tok.kind != TokKind::End) {
      if (at_word("req")) {
        bump();
        if (auto r = parse_requirement()) doc.requirements.push_back(std::move(*r));
      } else if (at_word("document")) {
        bump();
        if (tok.kind == TokKind::String) {
          doc.name = tok.text;
          bump();
        } else {
          error_here("expected a quoted document name", {"string"});
        }
      } else if (at_word("meta")) {
        bump();
        if (tok.kind != TokKind::Word) {
          error_here("expected a metadata key", {"identifier"});
        } else {
          std::string key = tok.text;
          bump();
          if (tok.kind == TokKind::String) {
            doc.metadata.emplace_back(key, tok.text);
            bump();
          } else {
            error_here("expected a quoted metadata value", {"string"});
          }
        }
      } else {
        error_here("expected 'document', 'meta' or 'req' at top level",
                   {"document", "meta", "req"});
        bump();
        while (tok.kind != TokKind::End && !at_word("req") && !at_word("document") &&
               !at_word("meta"))
          bump();
      }
    }
    return doc;
  }
};

}  // namespace dsl_detail

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

inline ParseResult parse_spec(std::string_view text) {
  ParseResult result;
  dsl_detail::Parser parser(text, result.errors);
  SpecificationDoc doc = parser.parse_document();
  if (doc.requirements.empty() && result.errors.empty()) {
    result.errors.push_back({{1, 1, 0}, "empty document", {"req"}});
  }
  // Structural rules (duplicate ids etc.) surface as parse errors so a
  // successful parse always validates cleanly.
  if (result.errors.empty()) {
    for (const auto& v : validate_doc(doc)) {
      result.errors.push_back({{1, 1, 0}, v.rule + ": " + v.message +
                                              (v.requirement_id.empty() ? "" : " (" + v.requirement_id + ")"),
                               {}});
    }
  }
  if (result.errors.empty()) result.doc = std::move(doc);
  return result;
}

namespace dsl_detail {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

inline void print_applicability(const Applicability& a, std::string& out) {
  if (a.classes) {
    out += "  item class";
    for (ItemClass c : *a.classes) {
      std::string n(to_name(c));
      for (char& ch : n)
        if (ch == '_') ch = '-';
      out += " " + n;
    }
    out += "\n";
  }
  if (a.profile) out += "  item profile " + std::string(to_name(*a.profile)) + "\n";
  if (a.shapes) {
    out += "  item shape";
    for (Shape s : *a.shapes) out += " " + std::string(to_name(s));
    out += "\n";
  }
  if (a.max_size_ratio) out += "  item size-ratio " + format_double(*a.max_size_ratio) + "\n";
  if (a.orientation_sweep) out += "  item orientation sweep\n";
}

}  // namespace dsl_detail

// Canonical text form. print_spec(parse_spec(s).doc) reparses to an equal
// document for every well-formed s.
inline std::string print_spec(const SpecificationDoc& doc) {
  using dsl_detail::quote;
  std::string out;
  if (!doc.name.empty()) out += "document " + quote(doc.name) + "\n";
  for (const auto& [k, v] : doc.metadata) out += "meta " + k + " " + quote(v) + "\n";
  for (const auto& r : doc.requirements) {
    out += "\nreq " + r.id + "\n";
    out += "  category " + std::string(to_name(r.category)) + "\n";
    out += "  kind " + std::string(to_name(r.kind())) + "\n";
    if (const auto* p = r.as<RangeParams>()) {
      out += "  signal " + std::string(to_name(p->signal)) + "\n";
      out += "  in [" + to_string(p->lo) + ", " + to_string(p->hi) + "]\n";
      if (p->window != SampleWindow::Always)
        out += "  window " + std::string(to_name(p->window)) + "\n";
      if (p->phase) out += "  phase " + std::string(to_name(*p->phase)) + "\n";
    } else if (const auto* p = r.as<ThresholdParams>()) {
      for (const auto& b : p->bounds) {
        out += std::string("  ") + (b.is_upper ? "max " : "min ") +
               std::string(to_name(b.signal)) + " " + to_string(b.bound) + "\n";
      }
      if (p->window != SampleWindow::Always)
        out += "  window " + std::string(to_name(p->window)) + "\n";
      if (p->phase) out += "  phase " + std::string(to_name(*p->phase)) + "\n";
    } else if (const auto* p = r.as<EventResponseParams>()) {
      out += "  signal " + std::string(to_name(p->trigger)) + "\n";
      out += "  within " + to_string(p->response_window) + "\n";
    } else if (const auto* p = r.as<HoldDurationParams>()) {
      out += "  for " + to_string(p->hold) + "\n";
      if (p->fraction) out += "  fraction " + format_double(*p->fraction) + "\n";
    } else if (const auto* p = r.as<SuccessRateParams>()) {
      out += "  signal " + std::string(to_name(p->event)) + "\n";
      out += "  fraction " + format_double(p->fraction) + "\n";
      if (p->flow_condition)
        out += "  for [" + to_string(p->flow_condition->first) + ", " +
               to_string(p->flow_condition->second) + "]\n";
    } else if (const auto* p = r.as<TrendParams>()) {
      out += "  signal " + std::string(to_name(p->event)) + "\n";
      out += "  max increase " + format_double(p->max_increase) + "\n";
      out += "  window baseline [" + to_string(p->baseline_lo) + ", " +
             to_string(p->baseline_hi) + "]\n";
      out += "  window final [" + to_string(p->final_lo) + ", " + to_string(p->final_hi) + "]\n";
    } else if (const auto* p = r.as<ProportionalityParams>()) {
      if (p->reference_pressure) {
        out += "  signal curvature\n";
        out += "  in [" + to_string(p->target_band->first) + ", " +
               to_string(p->target_band->second) + "]\n";
        out += "  for " + to_string(*p->reference_pressure) + "\n";
      }
      if (p->max_rel_residual) out += "  max residual " + format_double(*p->max_rel_residual) + "\n";
      if (p->max_intercept_frac)
        out += "  max intercept " + format_double(*p->max_intercept_frac) + "\n";
    } else if (const auto* p = r.as<NoCollisionParams>()) {
      out += "  signal " + std::string(to_name(p->predicate)) + "\n";
    }
    dsl_detail::print_applicability(r.applicability, out);
    for (const auto& m : r.methods) {
      out += "  method " + std::string(to_name(m.kind));
      if (!m.detail.empty()) out += " " + quote(m.detail);
      out += "\n";
    }
    if (!r.text.empty()) out += "  text " + quote(r.text) + "\n";
    out += "end\n";
  }
  return out;
}

}  // namespace gripcheck
