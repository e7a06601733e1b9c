#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace relhyp {

using json = nlohmann::json;

/// Encoded element of a peripheral model. The meaning of `value` depends on
/// the model kind: a coordinate vector for Z^d, a single table index for a
/// finite group, a freely reduced list of signed 1-based generator indices for
/// F_k.
struct ModelElement {
  std::vector<std::int64_t> value;

  auto operator<=>(const ModelElement&) const = default;
};

enum class ModelKind { FreeAbelian, FiniteTable, FreeGroup };

/// A computable copy of one peripheral subgroup H_lambda.
class PeripheralModel {
 public:
  static PeripheralModel free_abelian(int label, int rank);
  static PeripheralModel free_group(int label, int rank);
  /// `table[i][j]` is the index of i*j. Names and generators are optional;
  /// without generators every nonidentity element has length 1.
  static PeripheralModel finite_table(int label,
                                      std::vector<std::vector<int>> table,
                                      std::vector<std::string> names = {},
                                      std::vector<int> generators = {});

  int label() const noexcept { return label_; }
  ModelKind kind() const noexcept { return kind_; }
  /// Rank for Z^d and F_k, group order for finite tables.
  int rank() const noexcept { return rank_; }
  int order() const noexcept { return static_cast<int>(table_.size()); }
  bool is_finite() const noexcept { return kind_ == ModelKind::FiniteTable; }

  ModelElement identity() const;
  ModelElement product(const ModelElement& a, const ModelElement& b) const;
  ModelElement inverse(const ModelElement& a) const;
  bool is_identity(const ModelElement& a) const;
  /// Word length with respect to the model generators.
  int length(const ModelElement& a) const;
  /// Throws ParseError when `a` is not a well-formed element encoding.
  void check_element(const ModelElement& a) const;

  std::vector<ModelElement> generators() const;
  /// Nonidentity elements of length <= bound, ordered by (length, encoding).
  std::vector<ModelElement> elements_up_to_length(int bound) const;
  /// All elements; only available for finite tables.
  std::vector<ModelElement> all_elements() const;

  json element_to_json(const ModelElement& a) const;
  ModelElement element_from_json(const json& j) const;
  /// Exponent text used by the loop grammar: "3", "(1,-2)", "[1,-2]", ":a".
  std::string element_to_literal(const ModelElement& a) const;
  ModelElement element_from_literal(std::string_view text) const;

  const std::vector<std::vector<int>>& table() const noexcept { return table_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<int>& finite_generators() const noexcept {
    return generators_;
  }

  json to_json() const;
  static PeripheralModel from_json(const json& j);

  bool operator==(const PeripheralModel& other) const;

 private:
  PeripheralModel() = default;
  void finish_finite();

  int label_ = 0;
  ModelKind kind_ = ModelKind::FreeAbelian;
  int rank_ = 0;
  std::vector<std::vector<int>> table_;
  std::vector<std::string> names_;
  std::vector<int> generators_;
  int identity_index_ = 0;
  std::vector<int> inverse_table_;
  std::vector<int> length_table_;
};

/// A letter of X ∪ 𝓗. X letters carry a symbol id and a sign; H letters carry
/// a model label and a nonidentity model element.
struct Letter {
  bool is_h = false;
  int index = 0;
  int sign = 1;
  ModelElement elem;

  static Letter x(int symbol, int sign = 1) { return {false, symbol, sign, {}}; }
  static Letter h(int label, ModelElement e) {
    return {true, label, 1, std::move(e)};
  }

  auto operator<=>(const Letter&) const = default;
};

struct Word {
  std::vector<Letter> letters;

  Word() = default;
  Word(std::initializer_list<Letter> l) : letters(l) {}
  explicit Word(std::vector<Letter> l) : letters(std::move(l)) {}

  std::size_t size() const noexcept { return letters.size(); }
  bool empty() const noexcept { return letters.empty(); }
  const Letter& operator[](std::size_t i) const { return letters[i]; }

  auto operator<=>(const Word&) const = default;
};

/// Concatenation in the free monoid (no reduction).
Word operator*(const Word& u, const Word& v);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

class RelativePresentation {
 public:
  RelativePresentation() = default;
  /// Validates the data and stores every relator freely and cyclically
  /// reduced. Throws ParseError on invalid input.
  RelativePresentation(std::vector<std::string> x_symbols,
                       std::vector<PeripheralModel> models,
                       std::vector<Word> relators);

  const std::vector<std::string>& x_symbols() const noexcept { return x_symbols_; }
  const std::vector<PeripheralModel>& models() const noexcept { return models_; }
  const std::vector<Word>& relators() const noexcept { return relators_; }

  bool has_model(int label) const;
  const PeripheralModel& model(int label) const;
  std::optional<int> symbol_id(std::string_view name) const;

  bool operator==(const RelativePresentation&) const = default;

 private:
  std::vector<std::string> x_symbols_;
  std::vector<PeripheralModel> models_;
  std::vector<Word> relators_;
};

/// Syllable normal form in the free product F = (∗ H_λ) ∗ F(X).
Word free_reduce(const RelativePresentation& p, const Word& w);
/// Free reduction followed by cyclic reduction (merging the end syllables).
Word cyclic_reduce(const RelativePresentation& p, const Word& w);
Word inverse(const RelativePresentation& p, const Word& w);
Letter inverse(const RelativePresentation& p, const Letter& l);

inline std::size_t letter_count(const Word& w) noexcept { return w.size(); }

/// True when the word has no adjacent letters that combine in F.
bool is_syllable_reduced(const RelativePresentation& p, const Word& w);

json letter_to_json(const RelativePresentation& p, const Letter& l);
Letter letter_from_json(const RelativePresentation& p, const json& j);
json word_to_json(const RelativePresentation& p, const Word& w);
Word word_from_json(const RelativePresentation& p, const json& j);

/// Human-readable form using the loop grammar, e.g. "x h1^2 y^-1".
std::string to_string(const RelativePresentation& p, const Letter& l);
std::string to_string(const RelativePresentation& p, const Word& w);

json presentation_to_json(const RelativePresentation& p);
RelativePresentation presentation_from_json(const json& j);
/// Parses a presentation document (the "oracle" key, if any, is ignored here).
RelativePresentation parse_presentation(std::string_view text);

/// Parses JSON text, turning syntax errors into ParseError with byte offset.
json parse_json_text(std::string_view text);

}  // namespace relhyp
