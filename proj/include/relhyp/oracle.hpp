#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "relhyp/integer_lattice.hpp"
#include "relhyp/presentation.hpp"

namespace relhyp {

enum class OracleKind { FreeProduct, IntegerQuotient, FiniteQuotient, Plugin };

/// Homomorphism F -> Z^d. Images are given per X symbol and per model
/// generator; finite models must map to zero.
struct IntegerQuotientSpec {
  int dim = 0;
  std::map<std::string, IntVector> x_images;
  std::map<int, std::vector<IntVector>> model_images;
};

/// Homomorphism F -> (finite group given by a multiplication table). Z^d and
/// F_k models give images of their generators; finite models give the image
/// of every element.
struct FiniteQuotientSpec {
  std::vector<std::vector<int>> table;
  std::map<std::string, int> x_images;
  std::map<int, std::vector<int>> model_images;
};

/// External normal-form executable speaking line-delimited JSON: one word
/// (array of letter objects) per input line, one canonical word per output
/// line.
struct PluginSpec {
  std::string command;
};

/// Word-problem backend for G = F / <<R>>. Immutable after construction
/// except for the plugin's internal memo table, which is mutex-guarded.
class GroupOracle {
 public:
  static GroupOracle free_product();
  static GroupOracle integer_quotient(const RelativePresentation& p,
                                      IntegerQuotientSpec spec);
  static GroupOracle finite_quotient(const RelativePresentation& p,
                                     FiniteQuotientSpec spec);
  static GroupOracle plugin(PluginSpec spec);

  OracleKind kind() const noexcept;

  /// Throws OracleError when the oracle does not fit `p`: wrong kind, or
  /// some relator has a nonempty normal form.
  void validate(const RelativePresentation& p) const;

  Word normal_form(const RelativePresentation& p, const Word& w) const;
  std::vector<Word> normal_forms(const RelativePresentation& p,
                                 std::span<const Word> words) const;

  /// If w represents an element of H_label, returns a model element h with
  /// h == w in G. For plugin oracles this is a bounded search and may miss.
  std::optional<ModelElement> peripheral_element(const RelativePresentation& p,
                                                 int label, const Word& w) const;

  json to_json(const RelativePresentation& p) const;
  static GroupOracle from_json(const RelativePresentation& p, const json& j);

  /// The letter set the oracle's canonical words are built from is finite and
  /// every group element is reachable through it (lengths can be computed by
  /// exhaustive BFS).
  bool has_finite_alphabet(const RelativePresentation& p) const;

 private:
  struct FreeProductData {};
  struct IntegerData {
    IntegerQuotientSpec spec;
    std::vector<IntVector> basis_coeffs;  // per coordinate, over generator list
    std::vector<std::pair<int, int>> generators;  // (x symbol | model label, index)
    std::vector<bool> generator_is_x;
    std::map<int, std::shared_ptr<IntegerLattice>> peripheral_lattices;
  };
  struct FiniteData {
    FiniteQuotientSpec spec;
    int identity = 0;
    std::vector<int> inverse;
    std::vector<Word> canonical;  // per group element
    std::map<int, std::map<int, ModelElement>> peripheral_witness;
  };
  struct PluginData {
    PluginSpec spec;
    std::shared_ptr<std::mutex> mutex;
    std::shared_ptr<std::unordered_map<Word, Word, WordHash>> memo;
  };

  IntVector evaluate_integer(const RelativePresentation& p, const Word& w) const;
  int evaluate_finite(const RelativePresentation& p, const Word& w) const;
  Word integer_word(const RelativePresentation& p, const IntVector& coeffs) const;

  std::variant<FreeProductData, IntegerData, FiniteData, PluginData> data_;
};

Word normal_form(const RelativePresentation& p, const GroupOracle& o,
                 const Word& w);
bool equal(const RelativePresentation& p, const GroupOracle& o, const Word& u,
           const Word& v);

/// A presentation together with the oracle embedded in its document.
struct PresentationDocument {
  RelativePresentation presentation;
  std::optional<GroupOracle> oracle;
};

/// Parses a full document, validating the oracle against the presentation.
PresentationDocument parse_document(std::string_view text);
json document_to_json(const PresentationDocument& doc);

}  // namespace relhyp
