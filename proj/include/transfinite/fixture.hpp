#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "transfinite/ranks.hpp"

namespace transfinite {

/// (separation (a A) (b B) (family F) (xi 1)); b defaults to the complement of a.
struct SeparationSpec {
  std::string a, b, family;
  unsigned xi = 1;
};

/// (witness (of f) (lambda 2) (xi 1) (pairs F G ...)): one separation family
/// per consecutive value pair of f.
struct WitnessSpec {
  std::string of;
  unsigned lambda = 1;
  unsigned xi = 1;
  std::vector<std::string> pairs;
};

/// (presentation (base 0) (tail 1/8) (terms f g ...)).
struct PresentationSpec {
  Rational base;
  Rational tail;
  std::vector<std::string> terms;
};

/// One document: a space, an optional refinement, then named objects.
class Fixture {
 public:
  using Value = std::variant<PatternSet, StepFn, TransfiniteFamily, SeqFamily, SeparationSpec, WitnessSpec,
                             PresentationSpec>;
  struct Entry {
    std::string name;
    Value value;
    int line = 1;
  };
  struct Refinement {
    unsigned xi = 1;
    std::vector<PatternSet> sets;
  };

  static Fixture parse(std::string_view text);
  static Fixture load(const std::string& path);

  const SpaceDesc& space() const { return space_; }
  const Topology& base() const { return base_; }
  /// The refined topology when the document declares one, else the base.
  const Topology& topology() const { return topology_; }
  const std::optional<Refinement>& refinement() const { return refinement_; }
  const std::vector<Entry>& entries() const { return entries_; }

  const Entry* find(const std::string& name) const;
  const PatternSet& set(const std::string& name) const;
  const StepFn& fn(const std::string& name) const;
  const TransfiniteFamily& family(const std::string& name) const;
  const SeqFamily& seq(const std::string& name) const;
  UniformPresentation presentation(const PresentationSpec& p) const;
  ClassWitness class_witness(const WitnessSpec& w) const;

  std::vector<SExpr> to_sexprs() const;
  /// Canonical text; parse(print()) prints the same text.
  std::string print() const;

 private:
  template <class T>
  const T& get(const std::string& name, const char* what) const;

  SpaceDesc space_;
  Topology base_, topology_;
  std::optional<Refinement> refinement_;
  std::vector<Entry> entries_;
};

StepFn stepfn_from_sexpr(const SpaceDesc& space, const SExpr& e);
SeqFamily seq_from_sexpr(const SpaceDesc& space, const SExpr& e);

}  // namespace transfinite
