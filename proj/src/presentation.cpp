#include "relhyp/presentation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "relhyp/errors.hpp"
#include "relhyp/loop_literal.hpp"

namespace relhyp {

namespace {

std::vector<std::int64_t> reduce_free_word(std::vector<std::int64_t> w) {
  std::vector<std::int64_t> out;
  out.reserve(w.size());
  for (auto g : w) {
    if (!out.empty() && out.back() == -g) {
      out.pop_back();
    } else {
      out.push_back(g);
    }
  }
  return out;
}

std::int64_t parse_int(std::string_view text, std::size_t offset) {
  std::int64_t v = 0;
  auto first = text.data();
  auto last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("expected integer, got '" + std::string(text) + "'",
                     offset);
  }
  return v;
}

std::vector<std::int64_t> parse_int_list(std::string_view body) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto comma = body.find(',', start);
    if (comma == std::string_view::npos) comma = body.size();
    auto piece = body.substr(start, comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (!piece.empty()) out.push_back(parse_int(piece, start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PeripheralModel

PeripheralModel PeripheralModel::free_abelian(int label, int rank) {
  if (rank < 1) throw ParseError("Z^d model needs rank >= 1");
  PeripheralModel m;
  m.label_ = label;
  m.kind_ = ModelKind::FreeAbelian;
  m.rank_ = rank;
  return m;
}

PeripheralModel PeripheralModel::free_group(int label, int rank) {
  if (rank < 1) throw ParseError("F_k model needs rank >= 1");
  PeripheralModel m;
  m.label_ = label;
  m.kind_ = ModelKind::FreeGroup;
  m.rank_ = rank;
  return m;
}

PeripheralModel PeripheralModel::finite_table(int label,
                                              std::vector<std::vector<int>> table,
                                              std::vector<std::string> names,
                                              std::vector<int> generators) {
  PeripheralModel m;
  m.label_ = label;
  m.kind_ = ModelKind::FiniteTable;
  m.table_ = std::move(table);
  m.names_ = std::move(names);
  m.generators_ = std::move(generators);
  m.finish_finite();
  return m;
}

void PeripheralModel::finish_finite() {
  const int n = order();
  if (n < 1) throw ParseError("finite model needs a nonempty table");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n)
      throw ParseError("finite model table is not square");
    std::vector<char> seen(n, 0);
    for (int v : row) {
      if (v < 0 || v >= n) throw ParseError("finite model entry out of range");
      if (seen[v]) throw ParseError("finite model row is not a permutation");
      seen[v] = 1;
    }
  }
  identity_index_ = -1;
  for (int e = 0; e < n && identity_index_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = table_[e][a] == a && table_[a][e] == a;
    if (ok) identity_index_ = e;
  }
  if (identity_index_ < 0) throw ParseError("finite model has no identity");
  inverse_table_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == identity_index_) inverse_table_[a] = b;
  for (int a = 0; a < n; ++a)
    if (inverse_table_[a] < 0 || table_[inverse_table_[a]][a] != identity_index_)
      throw ParseError("finite model element without two-sided inverse");
  // Full associativity check for small tables, a fixed stride otherwise.
  const int stride = n <= 24 ? 1 : n / 24;
  for (int a = 0; a < n; a += stride)
    for (int b = 0; b < n; b += stride)
      for (int c = 0; c < n; c += stride)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw ParseError("finite model table is not associative");
  if (!names_.empty()) {
    if (static_cast<int>(names_.size()) != n)
      throw ParseError("finite model names must list every element");
    std::set<std::string> uniq(names_.begin(), names_.end());
    if (static_cast<int>(uniq.size()) != n)
      throw ParseError("finite model names must be distinct");
  }
  for (int g : generators_)
    if (g < 0 || g >= n) throw ParseError("finite model generator out of range");

  // Word lengths by BFS over the Cayley graph of the declared generators.
  std::vector<int> gens = generators_;
  if (gens.empty()) {
    for (int a = 0; a < n; ++a)
      if (a != identity_index_) gens.push_back(a);
  }
  length_table_.assign(n, -1);
  length_table_[identity_index_] = 0;
  std::deque<int> queue{identity_index_};
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int g : gens) {
      for (int s : {g, inverse_table_[g]}) {
        int b = table_[a][s];
        if (length_table_[b] < 0) {
          length_table_[b] = length_table_[a] + 1;
          queue.push_back(b);
        }
      }
    }
  }
  for (int a = 0; a < n; ++a)
    if (length_table_[a] < 0)
      throw ParseError("finite model generators do not generate the table");
}

ModelElement PeripheralModel::identity() const {
  switch (kind_) {
    case ModelKind::FreeAbelian:
      return {std::vector<std::int64_t>(rank_, 0)};
    case ModelKind::FiniteTable:
      return {{identity_index_}};
    case ModelKind::FreeGroup:
      return {};
  }
  return {};
}

ModelElement PeripheralModel::product(const ModelElement& a,
                                      const ModelElement& b) const {
  switch (kind_) {
    case ModelKind::FreeAbelian: {
      ModelElement r = a;
      for (int i = 0; i < rank_; ++i) r.value[i] += b.value[i];
      return r;
    }
    case ModelKind::FiniteTable:
      return {{table_[a.value[0]][b.value[0]]}};
    case ModelKind::FreeGroup: {
      std::vector<std::int64_t> w = a.value;
      w.insert(w.end(), b.value.begin(), b.value.end());
      return {reduce_free_word(std::move(w))};
    }
  }
  return {};
}

ModelElement PeripheralModel::inverse(const ModelElement& a) const {
  switch (kind_) {
    case ModelKind::FreeAbelian: {
      ModelElement r = a;
      for (auto& v : r.value) v = -v;
      return r;
    }
    case ModelKind::FiniteTable:
      return {{inverse_table_[a.value[0]]}};
    case ModelKind::FreeGroup: {
      ModelElement r;
      r.value.assign(a.value.rbegin(), a.value.rend());
      for (auto& v : r.value) v = -v;
      return r;
    }
  }
  return {};
}

bool PeripheralModel::is_identity(const ModelElement& a) const {
  switch (kind_) {
    case ModelKind::FreeAbelian:
      return std::all_of(a.value.begin(), a.value.end(),
                         [](auto v) { return v == 0; });
    case ModelKind::FiniteTable:
      return a.value[0] == identity_index_;
    case ModelKind::FreeGroup:
      return a.value.empty();
  }
  return false;
}

int PeripheralModel::length(const ModelElement& a) const {
  switch (kind_) {
    case ModelKind::FreeAbelian: {
      std::int64_t s = 0;
      for (auto v : a.value) s += std::llabs(v);
      return static_cast<int>(s);
    }
    case ModelKind::FiniteTable:
      return length_table_[a.value[0]];
    case ModelKind::FreeGroup:
      return static_cast<int>(a.value.size());
  }
  return 0;
}

void PeripheralModel::check_element(const ModelElement& a) const {
  switch (kind_) {
    case ModelKind::FreeAbelian:
      if (static_cast<int>(a.value.size()) != rank_)
        throw ParseError("Z^" + std::to_string(rank_) +
                         " element has wrong number of coordinates");
      return;
    case ModelKind::FiniteTable:
      if (a.value.size() != 1 || a.value[0] < 0 || a.value[0] >= order())
        throw ParseError("finite model element out of range");
      return;
    case ModelKind::FreeGroup:
      for (std::size_t i = 0; i < a.value.size(); ++i) {
        auto g = a.value[i];
        if (g == 0 || std::llabs(g) > rank_)
          throw ParseError("F_k element uses an unknown generator");
        if (i > 0 && a.value[i - 1] == -g)
          throw ParseError("F_k element is not freely reduced");
      }
      return;
  }
}

std::vector<ModelElement> PeripheralModel::generators() const {
  std::vector<ModelElement> out;
  switch (kind_) {
    case ModelKind::FreeAbelian:
      for (int i = 0; i < rank_; ++i) {
        ModelElement e{std::vector<std::int64_t>(rank_, 0)};
        e.value[i] = 1;
        out.push_back(std::move(e));
      }
      break;
    case ModelKind::FiniteTable:
      if (generators_.empty()) {
        for (int a = 0; a < order(); ++a)
          if (a != identity_index_) out.push_back({{a}});
      } else {
        for (int g : generators_) out.push_back({{g}});
      }
      break;
    case ModelKind::FreeGroup:
      for (int i = 1; i <= rank_; ++i) out.push_back({{i}});
      break;
  }
  return out;
}

std::vector<ModelElement> PeripheralModel::elements_up_to_length(int bound) const {
  std::vector<ModelElement> out;
  if (bound < 1) return out;
  switch (kind_) {
    case ModelKind::FreeAbelian: {
      // Enumerate the l1-ball coordinate by coordinate.
      std::vector<std::int64_t> cur(rank_, 0);
      std::function<void(int, int)> rec = [&](int i, int budget) {
        if (i == rank_) {
          ModelElement e{cur};
          if (!is_identity(e)) out.push_back(std::move(e));
          return;
        }
        for (int v = -budget; v <= budget; ++v) {
          cur[i] = v;
          rec(i + 1, budget - std::abs(v));
        }
        cur[i] = 0;
      };
      rec(0, bound);
      break;
    }
    case ModelKind::FiniteTable:
      for (int a = 0; a < order(); ++a)
        if (a != identity_index_ && length_table_[a] <= bound)
          out.push_back({{a}});
      break;
    case ModelKind::FreeGroup: {
      std::vector<std::vector<std::int64_t>> layer{{}};
      for (int len = 1; len <= bound; ++len) {
        std::vector<std::vector<std::int64_t>> next;
        for (const auto& w : layer) {
          for (int g = -rank_; g <= rank_; ++g) {
            if (g == 0 || (!w.empty() && w.back() == -g)) continue;
            auto v = w;
            v.push_back(g);
            next.push_back(std::move(v));
          }
        }
        for (const auto& w : next) out.push_back({w});
        layer = std::move(next);
      }
      break;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [this](const ModelElement& a, const ModelElement& b) {
                     int la = length(a), lb = length(b);
                     if (la != lb) return la < lb;
                     return a < b;
                   });
  return out;
}

std::vector<ModelElement> PeripheralModel::all_elements() const {
  if (kind_ != ModelKind::FiniteTable)
    throw PreconditionError("all_elements requires a finite model");
  std::vector<ModelElement> out;
  for (int a = 0; a < order(); ++a) out.push_back({{a}});
  return out;
}

json PeripheralModel::element_to_json(const ModelElement& a) const {
  switch (kind_) {
    case ModelKind::FreeAbelian:
      if (rank_ == 1) return a.value[0];
      return a.value;
    case ModelKind::FiniteTable:
      return a.value[0];
    case ModelKind::FreeGroup:
      return a.value;
  }
  return nullptr;
}

ModelElement PeripheralModel::element_from_json(const json& j) const {
  ModelElement e;
  switch (kind_) {
    case ModelKind::FreeAbelian:
      if (j.is_number_integer()) {
        e.value = {j.get<std::int64_t>()};
      } else if (j.is_array()) {
        for (const auto& v : j) {
          if (!v.is_number_integer())
            throw ParseError("Z^d element coordinates must be integers");
          e.value.push_back(v.get<std::int64_t>());
        }
      } else {
        throw ParseError("Z^d element must be an integer or integer array");
      }
      break;
    case ModelKind::FiniteTable:
      if (j.is_number_integer()) {
        e.value = {j.get<std::int64_t>()};
      } else if (j.is_string()) {
        auto it = std::find(names_.begin(), names_.end(), j.get<std::string>());
        if (it == names_.end())
          throw ParseError("unknown finite model element '" +
                           j.get<std::string>() + "'");
        e.value = {it - names_.begin()};
      } else {
        throw ParseError("finite model element must be an index or a name");
      }
      break;
    case ModelKind::FreeGroup:
      if (!j.is_array()) throw ParseError("F_k element must be an array");
      for (const auto& v : j) {
        if (!v.is_number_integer())
          throw ParseError("F_k element letters must be integers");
        e.value.push_back(v.get<std::int64_t>());
      }
      break;
  }
  check_element(e);
  return e;
}

std::string PeripheralModel::element_to_literal(const ModelElement& a) const {
  std::ostringstream os;
  switch (kind_) {
    case ModelKind::FreeAbelian:
      if (rank_ == 1) {
        os << a.value[0];
      } else {
        os << '(';
        for (int i = 0; i < rank_; ++i) os << (i ? "," : "") << a.value[i];
        os << ')';
      }
      break;
    case ModelKind::FiniteTable:
      if (!names_.empty())
        os << names_[a.value[0]];
      else
        os << a.value[0];
      break;
    case ModelKind::FreeGroup:
      os << '[';
      for (std::size_t i = 0; i < a.value.size(); ++i)
        os << (i ? "," : "") << a.value[i];
      os << ']';
      break;
  }
  return os.str();
}

ModelElement PeripheralModel::element_from_literal(std::string_view text) const {
  ModelElement e;
  switch (kind_) {
    case ModelKind::FreeAbelian:
      if (!text.empty() && text.front() == '(') {
        if (text.back() != ')') throw ParseError("unterminated Z^d tuple");
        e.value = parse_int_list(text.substr(1, text.size() - 2));
      } else {
        e.value = {parse_int(text, 0)};
      }
      break;
    case ModelKind::FiniteTable: {
      auto it = std::find(names_.begin(), names_.end(), std::string(text));
      if (it != names_.end()) {
        e.value = {it - names_.begin()};
      } else {
        e.value = {parse_int(text, 0)};
      }
      break;
    }
    case ModelKind::FreeGroup:
      if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        throw ParseError("F_k element literal must look like [1,-2]");
      e.value = parse_int_list(text.substr(1, text.size() - 2));
      break;
  }
  check_element(e);
  return e;
}

json PeripheralModel::to_json() const {
  json j;
  j["label"] = label_;
  switch (kind_) {
    case ModelKind::FreeAbelian:
      j["kind"] = "Z^d";
      j["rank"] = rank_;
      break;
    case ModelKind::FreeGroup:
      j["kind"] = "F_k";
      j["rank"] = rank_;
      break;
    case ModelKind::FiniteTable:
      j["kind"] = "finite";
      j["table"] = table_;
      if (!names_.empty()) j["names"] = names_;
      if (!generators_.empty()) j["generators"] = generators_;
      break;
  }
  return j;
}

PeripheralModel PeripheralModel::from_json(const json& j) {
  if (!j.is_object()) throw ParseError("model must be an object");
  if (!j.contains("label") || !j["label"].is_number_integer())
    throw ParseError("model needs an integer \"label\"");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ParseError("model needs a \"kind\"");
  const int label = j["label"].get<int>();
  const auto kind = j["kind"].get<std::string>();
  auto rank_of = [&]() {
    if (!j.contains("rank") || !j["rank"].is_number_integer())
      throw ParseError("model kind " + kind + " needs an integer \"rank\"");
    return j["rank"].get<int>();
  };
  if (kind == "Z^d" || kind == "Z") return free_abelian(label, rank_of());
  if (kind == "F_k") return free_group(label, rank_of());
  if (kind == "finite") {
    if (!j.contains("table") || !j["table"].is_array())
      throw ParseError("finite model needs a \"table\"");
    std::vector<std::vector<int>> table;
    try {
      table = j["table"].get<std::vector<std::vector<int>>>();
    } catch (const json::exception&) {
      throw ParseError("finite model table must be an integer matrix");
    }
    std::vector<std::string> names;
    std::vector<int> gens;
    try {
      if (j.contains("names")) names = j["names"].get<std::vector<std::string>>();
      if (j.contains("generators")) gens = j["generators"].get<std::vector<int>>();
    } catch (const json::exception&) {
      throw ParseError("finite model names/generators malformed");
    }
    return finite_table(label, std::move(table), std::move(names), std::move(gens));
  }
  throw ParseError("unknown model kind '" + kind + "'");
}

bool PeripheralModel::operator==(const PeripheralModel& o) const {
  return label_ == o.label_ && kind_ == o.kind_ && rank_ == o.rank_ &&
         table_ == o.table_ && names_ == o.names_ && generators_ == o.generators_;
}

// ---------------------------------------------------------------------------
// Words

Word operator*(const Word& u, const Word& v) {
  Word r = u;
  r.letters.insert(r.letters.end(), v.letters.begin(), v.letters.end());
  return r;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (const auto& l : w.letters) {
    mix(static_cast<std::uint64_t>(l.is_h));
    mix(static_cast<std::uint64_t>(l.index));
    mix(static_cast<std::uint64_t>(l.sign));
    for (auto v : l.elem.value) mix(static_cast<std::uint64_t>(v));
    mix(0xffULL);
  }
  return h;
}

// ---------------------------------------------------------------------------
// RelativePresentation

RelativePresentation::RelativePresentation(std::vector<std::string> x_symbols,
                                           std::vector<PeripheralModel> models,
                                           std::vector<Word> relators)
    : x_symbols_(std::move(x_symbols)), models_(std::move(models)) {
  std::set<std::string> names;
  for (const auto& s : x_symbols_) {
    if (s.empty()) throw ParseError("empty generator symbol");
    if (!names.insert(s).second)
      throw ParseError("duplicate generator symbol '" + s + "'");
  }
  std::set<int> labels;
  for (const auto& m : models_)
    if (!labels.insert(m.label()).second)
      throw ParseError("duplicate model label " + std::to_string(m.label()));
  std::sort(models_.begin(), models_.end(),
            [](const auto& a, const auto& b) { return a.label() < b.label(); });

  for (std::size_t r = 0; r < relators.size(); ++r) {
    const auto& rel = relators[r];
    if (rel.empty()) throw ParseError("relator " + std::to_string(r) + " is empty");
    for (const auto& l : rel.letters) {
      if (l.is_h) {
        if (!has_model(l.index))
          throw ParseError("unknown model label " + std::to_string(l.index));
        const auto& m = model(l.index);
        m.check_element(l.elem);
        if (m.is_identity(l.elem)) throw ParseError("identity peripheral letter");
      } else {
        if (l.index < 0 || l.index >= static_cast<int>(x_symbols_.size()))
          throw ParseError("unknown generator symbol id");
        if (l.sign != 1 && l.sign != -1) throw ParseError("sign must be +1 or -1");
      }
    }
    auto reduced = cyclic_reduce(*this, rel);
    if (reduced.empty())
      throw ParseError("relator " + std::to_string(r) + " is freely trivial");
    relators_.push_back(std::move(reduced));
  }
}

bool RelativePresentation::has_model(int label) const {
  return std::any_of(models_.begin(), models_.end(),
                     [label](const auto& m) { return m.label() == label; });
}

const PeripheralModel& RelativePresentation::model(int label) const {
  for (const auto& m : models_)
    if (m.label() == label) return m;
  throw PreconditionError("unknown model label " + std::to_string(label));
}

std::optional<int> RelativePresentation::symbol_id(std::string_view name) const {
  for (std::size_t i = 0; i < x_symbols_.size(); ++i)
    if (x_symbols_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

// Pushes `l` onto a reduced stack, combining with the top as needed.
void push_reduced(const RelativePresentation& p, std::vector<Letter>& stack,
                  Letter l) {
  if (l.is_h) {
    const auto& m = p.model(l.index);
    if (m.is_identity(l.elem)) return;
    if (!stack.empty() && stack.back().is_h && stack.back().index == l.index) {
      auto merged = m.product(stack.back().elem, l.elem);
      stack.pop_back();
      if (!m.is_identity(merged)) stack.push_back(Letter::h(l.index, std::move(merged)));
      return;
    }
    stack.push_back(std::move(l));
    return;
  }
  if (!stack.empty() && !stack.back().is_h && stack.back().index == l.index &&
      stack.back().sign == -l.sign) {
    stack.pop_back();
    return;
  }
  stack.push_back(std::move(l));
}

}  // namespace

Word free_reduce(const RelativePresentation& p, const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (const auto& l : w.letters) push_reduced(p, stack, l);
  return Word(std::move(stack));
}

Word cyclic_reduce(const RelativePresentation& p, const Word& w) {
  std::deque<Letter> d;
  for (auto& l : free_reduce(p, w).letters) d.push_back(std::move(l));
  while (d.size() >= 2) {
    auto& first = d.front();
    auto& last = d.back();
    if (first.is_h && last.is_h && first.index == last.index) {
      // Conjugate by the first syllable: the ends merge into one.
      const auto& m = p.model(first.index);
      auto merged = m.product(last.elem, first.elem);
      const int label = first.index;
      d.pop_front();
      d.pop_back();
      if (!m.is_identity(merged)) d.push_back(Letter::h(label, std::move(merged)));
      continue;
    }
    if (!first.is_h && !last.is_h && first.index == last.index &&
        first.sign == -last.sign) {
      d.pop_front();
      d.pop_back();
      continue;
    }
    break;
  }
  return Word(std::vector<Letter>(d.begin(), d.end()));
}

Letter inverse(const RelativePresentation& p, const Letter& l) {
  if (l.is_h) return Letter::h(l.index, p.model(l.index).inverse(l.elem));
  return Letter::x(l.index, -l.sign);
}

Word inverse(const RelativePresentation& p, const Word& w) {
  Word r;
  r.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    r.letters.push_back(inverse(p, *it));
  return r;
}

bool is_syllable_reduced(const RelativePresentation& p, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& l = w[i];
    if (l.is_h && p.model(l.index).is_identity(l.elem)) return false;
    if (i == 0) continue;
    const auto& prev = w[i - 1];
    if (l.is_h && prev.is_h && l.index == prev.index) return false;
    if (!l.is_h && !prev.is_h && l.index == prev.index && l.sign == -prev.sign)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON

json letter_to_json(const RelativePresentation& p, const Letter& l) {
  if (l.is_h) {
    return json{{"h",
                 {{"lambda", l.index},
                  {"elem", p.model(l.index).element_to_json(l.elem)}}}};
  }
  return json{{"x", p.x_symbols().at(l.index)}, {"sign", l.sign}};
}

Letter letter_from_json(const RelativePresentation& p, const json& j) {
  if (!j.is_object()) throw ParseError("letter must be an object");
  if (j.contains("x")) {
    if (!j["x"].is_string()) throw ParseError("letter \"x\" must be a string");
    auto id = p.symbol_id(j["x"].get<std::string>());
    if (!id) throw ParseError("unknown generator '" + j["x"].get<std::string>() + "'");
    int sign = 1;
    if (j.contains("sign")) {
      if (!j["sign"].is_number_integer()) throw ParseError("sign must be 1 or -1");
      sign = j["sign"].get<int>();
    }
    if (sign != 1 && sign != -1) throw ParseError("sign must be 1 or -1");
    return Letter::x(*id, sign);
  }
  if (j.contains("h")) {
    const auto& h = j["h"];
    if (!h.is_object() || !h.contains("lambda") || !h["lambda"].is_number_integer() ||
        !h.contains("elem"))
      throw ParseError("peripheral letter needs integer \"lambda\" and \"elem\"");
    const int label = h["lambda"].get<int>();
    if (!p.has_model(label))
      throw ParseError("unknown model label " + std::to_string(label));
    const auto& m = p.model(label);
    auto e = m.element_from_json(h["elem"]);
    if (m.is_identity(e)) throw ParseError("identity peripheral letter");
    return Letter::h(label, std::move(e));
  }
  throw ParseError("letter must have an \"x\" or \"h\" key");
}

json word_to_json(const RelativePresentation& p, const Word& w) {
  json arr = json::array();
  for (const auto& l : w.letters) arr.push_back(letter_to_json(p, l));
  return arr;
}

Word word_from_json(const RelativePresentation& p, const json& j) {
  if (!j.is_array()) throw ParseError("word must be an array of letters");
  Word w;
  for (const auto& l : j) w.letters.push_back(letter_from_json(p, l));
  return w;
}

std::string to_string(const RelativePresentation& p, const Letter& l) {
  if (l.is_h) {
    const auto& m = p.model(l.index);
    std::string head = "h" + std::to_string(l.index);
    switch (m.kind()) {
      case ModelKind::FreeAbelian:
        return head + "^" + m.element_to_literal(l.elem);
      case ModelKind::FiniteTable:
        return head + ":" + m.element_to_literal(l.elem);
      case ModelKind::FreeGroup:
        return head + m.element_to_literal(l.elem);
    }
  }
  const auto& name = p.x_symbols().at(l.index);
  return l.sign > 0 ? name : name + "^-1";
}

std::string to_string(const RelativePresentation& p, const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += to_string(p, w[i]);
  }
  return s;
}

json presentation_to_json(const RelativePresentation& p) {
  json j;
  j["x"] = p.x_symbols();
  j["models"] = json::array();
  for (const auto& m : p.models()) j["models"].push_back(m.to_json());
  j["relators"] = json::array();
  for (const auto& r : p.relators()) j["relators"].push_back(word_to_json(p, r));
  return j;
}

RelativePresentation presentation_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("presentation document must be an object");
  std::vector<std::string> xs;
  if (j.contains("x")) {
    if (!j["x"].is_array()) throw ParseError("\"x\" must be an array of strings");
    for (const auto& s : j["x"]) {
      if (!s.is_string()) throw ParseError("\"x\" must be an array of strings");
      xs.push_back(s.get<std::string>());
    }
  }
  std::vector<PeripheralModel> models;
  if (j.contains("models")) {
    if (!j["models"].is_array()) throw ParseError("\"models\" must be an array");
    for (const auto& m : j["models"]) models.push_back(PeripheralModel::from_json(m));
  }
  // Letters are decoded against a relator-free presentation first so that
  // symbol and label lookups work.
  RelativePresentation alphabet(xs, models, {});
  std::vector<Word> relators;
  if (j.contains("relators")) {
    if (!j["relators"].is_array()) throw ParseError("\"relators\" must be an array");
    for (const auto& r : j["relators"])
      relators.push_back(r.is_string() ? parse_loop_literal(alphabet, r.get<std::string>())
                                       : word_from_json(alphabet, r));
  }
  return RelativePresentation(std::move(xs), std::move(models), std::move(relators));
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON syntax error: ") + e.what(), e.byte);
  }
}

RelativePresentation parse_presentation(std::string_view text) {
  return presentation_from_json(parse_json_text(text));
}

}  // namespace relhyp
