#include "relhyp/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "relhyp/errors.hpp"

namespace relhyp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

IntVector& add_scaled(IntVector& acc, const IntVector& v, std::int64_t s) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s * v[i];
  return acc;
}

std::vector<std::vector<int>> check_group_table(std::vector<std::vector<int>> table) {
  // Reuse the finite-model validation for the quotient's table.
  auto m = PeripheralModel::finite_table(0, table);
  return m.table();
}

}  // namespace

GroupOracle GroupOracle::free_product() {
  GroupOracle o;
  o.data_ = FreeProductData{};
  return o;
}

GroupOracle GroupOracle::integer_quotient(const RelativePresentation& p,
                                          IntegerQuotientSpec spec) {
  if (spec.dim < 1) throw OracleError("integer_quotient needs dim >= 1");
  IntegerData d;
  std::vector<IntVector> images;
  for (std::size_t s = 0; s < p.x_symbols().size(); ++s) {
    auto it = spec.x_images.find(p.x_symbols()[s]);
    if (it == spec.x_images.end())
      throw OracleError("integer_quotient has no image for generator '" +
                        p.x_symbols()[s] + "'");
    if (static_cast<int>(it->second.size()) != spec.dim)
      throw OracleError("integer_quotient image has wrong dimension");
    d.generators.emplace_back(static_cast<int>(s), 0);
    d.generator_is_x.push_back(true);
    images.push_back(it->second);
  }
  for (const auto& m : p.models()) {
    auto it = spec.model_images.find(m.label());
    if (m.is_finite()) {
      if (it != spec.model_images.end())
        for (const auto& v : it->second)
          for (auto c : v)
            if (c != 0)
              throw OracleError("finite model must map to zero in Z^d");
      d.peripheral_lattices[m.label()] =
          std::make_shared<IntegerLattice>(spec.dim, std::vector<IntVector>{});
      continue;
    }
    if (it == spec.model_images.end() ||
        static_cast<int>(it->second.size()) != m.rank())
      throw OracleError("integer_quotient needs one image per generator of model " +
                        std::to_string(m.label()));
    for (int j = 0; j < m.rank(); ++j) {
      if (static_cast<int>(it->second[j].size()) != spec.dim)
        throw OracleError("integer_quotient image has wrong dimension");
      d.generators.emplace_back(m.label(), j);
      d.generator_is_x.push_back(false);
      images.push_back(it->second[j]);
    }
    d.peripheral_lattices[m.label()] =
        std::make_shared<IntegerLattice>(spec.dim, it->second);
  }
  IntegerLattice all(spec.dim, images);
  for (int i = 0; i < spec.dim; ++i) {
    IntVector e(spec.dim, 0);
    e[i] = 1;
    auto c = all.solve(e);
    if (!c) throw OracleError("integer_quotient map is not onto Z^d");
    d.basis_coeffs.push_back(*c);
  }
  d.spec = std::move(spec);
  GroupOracle o;
  o.data_ = std::move(d);
  return o;
}

GroupOracle GroupOracle::finite_quotient(const RelativePresentation& p,
                                         FiniteQuotientSpec spec) {
  FiniteData d;
  try {
    spec.table = check_group_table(std::move(spec.table));
  } catch (const ParseError& e) {
    throw OracleError(std::string("finite_quotient table: ") + e.what());
  }
  const auto table_model = PeripheralModel::finite_table(0, spec.table);
  const int n = table_model.order();
  d.identity = static_cast<int>(table_model.identity().value[0]);
  d.inverse.resize(n);
  for (int a = 0; a < n; ++a)
    d.inverse[a] = static_cast<int>(table_model.inverse({{a}}).value[0]);
  auto mul = [&](int a, int b) { return spec.table[a][b]; };
  auto in_range = [n](int v) { return v >= 0 && v < n; };

  for (const auto& s : p.x_symbols()) {
    auto it = spec.x_images.find(s);
    if (it == spec.x_images.end() || !in_range(it->second))
      throw OracleError("finite_quotient has no valid image for generator '" + s + "'");
  }
  for (const auto& m : p.models()) {
    auto it = spec.model_images.find(m.label());
    const int need = m.is_finite() ? m.order() : m.rank();
    if (it == spec.model_images.end() || static_cast<int>(it->second.size()) != need)
      throw OracleError("finite_quotient needs " + std::to_string(need) +
                        " images for model " + std::to_string(m.label()));
    for (int v : it->second)
      if (!in_range(v)) throw OracleError("finite_quotient image out of range");
    const auto& img = it->second;
    if (m.is_finite()) {
      for (int a = 0; a < m.order(); ++a)
        for (int b = 0; b < m.order(); ++b)
          if (img[m.table()[a][b]] != mul(img[a], img[b]))
            throw OracleError("finite_quotient map on model " +
                              std::to_string(m.label()) + " is not a homomorphism");
    } else if (m.kind() == ModelKind::FreeAbelian) {
      for (int a = 0; a < m.rank(); ++a)
        for (int b = 0; b < m.rank(); ++b)
          if (mul(img[a], img[b]) != mul(img[b], img[a]))
            throw OracleError("finite_quotient images of a Z^d model must commute");
    }
  }
  d.spec = std::move(spec);

  GroupOracle o;
  o.data_ = std::move(d);
  auto& fd = std::get<FiniteData>(o.data_);

  // Shortlex BFS over a finite letter set gives one canonical word per element.
  std::vector<Letter> alphabet;
  for (std::size_t s = 0; s < p.x_symbols().size(); ++s) {
    alphabet.push_back(Letter::x(static_cast<int>(s), 1));
    alphabet.push_back(Letter::x(static_cast<int>(s), -1));
  }
  for (const auto& m : p.models()) {
    if (m.is_finite()) {
      for (auto& e : m.elements_up_to_length(m.order())) alphabet.push_back(Letter::h(m.label(), e));
    } else {
      for (auto& g : m.generators()) {
        alphabet.push_back(Letter::h(m.label(), g));
        alphabet.push_back(Letter::h(m.label(), m.inverse(g)));
      }
    }
  }
  std::vector<std::optional<Word>> found(n);
  found[fd.identity] = Word{};
  std::deque<int> queue{fd.identity};
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (const auto& l : alphabet) {
      Word w = *found[a] * Word{l};
      int b = o.evaluate_finite(p, w);
      if (!found[b]) {
        found[b] = w;
        queue.push_back(b);
      }
    }
  }
  fd.canonical.resize(n);
  for (int a = 0; a < n; ++a) {
    if (!found[a]) throw OracleError("finite_quotient evaluation map is not onto");
    fd.canonical[a] = free_reduce(p, *found[a]);
  }

  // Image of each peripheral subgroup, with a witness element per image.
  for (const auto& m : p.models()) {
    auto& witness = fd.peripheral_witness[m.label()];
    const auto& img = fd.spec.model_images.at(m.label());
    if (m.is_finite()) {
      for (int a = 0; a < m.order(); ++a) {
        ModelElement e{{a}};
        if (!witness.count(img[a]) ||
            m.length(e) < m.length(witness.at(img[a])))
          witness[img[a]] = e;
      }
      continue;
    }
    std::vector<std::pair<ModelElement, int>> steps;
    for (int j = 0; j < m.rank(); ++j) {
      auto g = m.generators()[j];
      steps.emplace_back(g, img[j]);
      steps.emplace_back(m.inverse(g), fd.inverse[img[j]]);
    }
    witness[fd.identity] = m.identity();
    std::deque<int> q{fd.identity};
    while (!q.empty()) {
      int a = q.front();
      q.pop_front();
      for (const auto& [g, gi] : steps) {
        int b = fd.spec.table[a][gi];
        if (!witness.count(b)) {
          witness[b] = m.product(witness.at(a), g);
          q.push_back(b);
        }
      }
    }
  }
  return o;
}

GroupOracle GroupOracle::plugin(PluginSpec spec) {
  if (spec.command.empty()) throw OracleError("plugin oracle needs a command");
  PluginData d;
  d.spec = std::move(spec);
  d.mutex = std::make_shared<std::mutex>();
  d.memo = std::make_shared<std::unordered_map<Word, Word, WordHash>>();
  GroupOracle o;
  o.data_ = std::move(d);
  return o;
}

OracleKind GroupOracle::kind() const noexcept {
  return std::visit(overloaded{
                        [](const FreeProductData&) { return OracleKind::FreeProduct; },
                        [](const IntegerData&) { return OracleKind::IntegerQuotient; },
                        [](const FiniteData&) { return OracleKind::FiniteQuotient; },
                        [](const PluginData&) { return OracleKind::Plugin; },
                    },
                    data_);
}

bool GroupOracle::has_finite_alphabet(const RelativePresentation& p) const {
  return std::all_of(p.models().begin(), p.models().end(),
                     [](const auto& m) { return m.is_finite(); });
}

void GroupOracle::validate(const RelativePresentation& p) const {
  if (kind() == OracleKind::FreeProduct) {
    if (!p.relators().empty())
      throw OracleError("free_product oracle requires an empty relator set");
    return;
  }
  auto forms = normal_forms(p, p.relators());
  for (std::size_t r = 0; r < forms.size(); ++r)
    if (!forms[r].empty())
      throw OracleError("relator " + std::to_string(r) + " (" +
                        to_string(p, p.relators()[r]) +
                        ") is not trivial under the oracle");
}

IntVector GroupOracle::evaluate_integer(const RelativePresentation& p,
                                        const Word& w) const {
  const auto& d = std::get<IntegerData>(data_);
  IntVector v(d.spec.dim, 0);
  for (const auto& l : w.letters) {
    if (!l.is_h) {
      add_scaled(v, d.spec.x_images.at(p.x_symbols()[l.index]), l.sign);
      continue;
    }
    const auto& m = p.model(l.index);
    if (m.is_finite()) continue;
    const auto& imgs = d.spec.model_images.at(l.index);
    if (m.kind() == ModelKind::FreeAbelian) {
      for (int j = 0; j < m.rank(); ++j) add_scaled(v, imgs[j], l.elem.value[j]);
    } else {
      for (auto g : l.elem.value) add_scaled(v, imgs[std::llabs(g) - 1], g > 0 ? 1 : -1);
    }
  }
  return v;
}

int GroupOracle::evaluate_finite(const RelativePresentation& p, const Word& w) const {
  const auto& d = std::get<FiniteData>(data_);
  int acc = d.identity;
  for (const auto& l : w.letters) {
    int g;
    if (!l.is_h) {
      g = d.spec.x_images.at(p.x_symbols()[l.index]);
      if (l.sign < 0) g = d.inverse[g];
    } else {
      const auto& m = p.model(l.index);
      const auto& img = d.spec.model_images.at(l.index);
      if (m.is_finite()) {
        g = img[l.elem.value[0]];
      } else if (m.kind() == ModelKind::FreeAbelian) {
        g = d.identity;
        for (int j = 0; j < m.rank(); ++j) {
          auto c = l.elem.value[j];
          int s = c >= 0 ? img[j] : d.inverse[img[j]];
          for (std::int64_t k = 0; k < std::llabs(c); ++k) g = d.spec.table[g][s];
        }
      } else {
        g = d.identity;
        for (auto c : l.elem.value) {
          int s = img[std::llabs(c) - 1];
          if (c < 0) s = d.inverse[s];
          g = d.spec.table[g][s];
        }
      }
    }
    acc = d.spec.table[acc][g];
  }
  return acc;
}

Word GroupOracle::integer_word(const RelativePresentation& p, const IntVector& coeffs) const {
  const auto& d = std::get<IntegerData>(data_);
  Word w;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const auto c = coeffs[j];
    if (c == 0) continue;
    const auto [id, gen] = d.generators[j];
    if (d.generator_is_x[j]) {
      for (std::int64_t k = 0; k < std::llabs(c); ++k)
        w.letters.push_back(Letter::x(id, c > 0 ? 1 : -1));
      continue;
    }
    const auto& m = p.model(id);
    ModelElement e;
    if (m.kind() == ModelKind::FreeAbelian) {
      e.value.assign(m.rank(), 0);
      e.value[gen] = c;
    } else {
      e.value.assign(static_cast<std::size_t>(std::llabs(c)), c > 0 ? gen + 1 : -(gen + 1));
    }
    w.letters.push_back(Letter::h(id, std::move(e)));
  }
  return free_reduce(p, w);
}

Word GroupOracle::normal_form(const RelativePresentation& p, const Word& w) const {
  return std::visit(
      overloaded{
          [&](const FreeProductData&) { return free_reduce(p, w); },
          [&](const IntegerData& d) {
            auto v = evaluate_integer(p, w);
            IntVector coeffs(d.generators.size(), 0);
            for (int i = 0; i < d.spec.dim; ++i)
              if (v[i] != 0) add_scaled(coeffs, d.basis_coeffs[i], v[i]);
            return integer_word(p, coeffs);
          },
          [&](const FiniteData& d) { return d.canonical[evaluate_finite(p, w)]; },
          [&](const PluginData&) {
            std::vector<Word> one{w};
            return normal_forms(p, one).front();
          },
      },
      data_);
}

std::vector<Word> GroupOracle::normal_forms(const RelativePresentation& p,
                                            std::span<const Word> words) const {
  if (const auto* pd = std::get_if<PluginData>(&data_)) {
    std::lock_guard lock(*pd->mutex);
    std::vector<Word> misses;
    for (const auto& w : words) {
      auto r = free_reduce(p, w);
      if (!pd->memo->count(r) &&
          std::find(misses.begin(), misses.end(), r) == misses.end())
        misses.push_back(r);
    }
    if (!misses.empty()) {
      char path[] = "/tmp/relhyp-plugin-XXXXXX";
      int fd = mkstemp(path);
      if (fd < 0) throw OracleError("plugin: cannot create temporary file");
      close(fd);
      {
        std::ofstream in(path);
        for (const auto& w : misses) in << word_to_json(p, w).dump() << '\n';
      }
      std::string cmd = pd->spec.command + " < '" + path + "'";
      FILE* pipe = popen(cmd.c_str(), "r");
      if (!pipe) {
        std::remove(path);
        throw OracleError("plugin: cannot start '" + pd->spec.command + "'");
      }
      std::string out;
      char buf[4096];
      std::size_t n;
      while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
      int status = pclose(pipe);
      std::remove(path);
      if (status != 0)
        throw OracleError("plugin '" + pd->spec.command + "' exited with status " +
                          std::to_string(status));
      std::istringstream lines(out);
      std::string line;
      std::size_t i = 0;
      while (std::getline(lines, line)) {
        if (line.empty()) continue;
        if (i >= misses.size()) throw OracleError("plugin returned too many lines");
        Word nf;
        try {
          nf = word_from_json(p, json::parse(line));
        } catch (const std::exception& e) {
          throw OracleError(std::string("plugin returned a malformed word: ") + e.what());
        }
        (*pd->memo)[misses[i++]] = free_reduce(p, nf);
      }
      if (i != misses.size()) throw OracleError("plugin returned too few lines");
    }
    std::vector<Word> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(pd->memo->at(free_reduce(p, w)));
    return out;
  }
  std::vector<Word> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(normal_form(p, w));
  return out;
}

std::optional<ModelElement> GroupOracle::peripheral_element(const RelativePresentation& p,
                                                            int label,
                                                            const Word& w) const {
  const auto& m = p.model(label);
  return std::visit(
      overloaded{
          [&](const IntegerData& d) -> std::optional<ModelElement> {
            auto v = evaluate_integer(p, w);
            auto c = d.peripheral_lattices.at(label)->solve(v);
            if (!c) return std::nullopt;
            if (m.is_finite()) return m.identity();
            if (m.kind() == ModelKind::FreeAbelian) return ModelElement{*c};
            ModelElement e;
            for (int j = 0; j < m.rank(); ++j)
              for (std::int64_t k = 0; k < std::llabs((*c)[j]); ++k)
                e = m.product(e, ModelElement{{(*c)[j] > 0 ? j + 1 : -(j + 1)}});
            return e;
          },
          [&](const FiniteData& d) -> std::optional<ModelElement> {
            const auto& wit = d.peripheral_witness.at(label);
            auto it = wit.find(evaluate_finite(p, w));
            if (it == wit.end()) return std::nullopt;
            return it->second;
          },
          [&](const auto&) -> std::optional<ModelElement> {
            // Free products and plugins: read it off the normal form.
            auto nf = normal_form(p, w);
            if (nf.empty()) return m.identity();
            if (nf.size() == 1 && nf[0].is_h && nf[0].index == label) return nf[0].elem;
            return std::nullopt;
          },
      },
      data_);
}

json GroupOracle::to_json(const RelativePresentation&) const {
  return std::visit(
      overloaded{
          [](const FreeProductData&) { return json{{"kind", "free_product"}}; },
          [](const IntegerData& d) {
            json models = json::object();
            for (const auto& [label, imgs] : d.spec.model_images)
              models[std::to_string(label)] = imgs;
            return json{{"kind", "integer_quotient"},
                        {"dim", d.spec.dim},
                        {"x", d.spec.x_images},
                        {"models", models}};
          },
          [](const FiniteData& d) {
            json models = json::object();
            for (const auto& [label, imgs] : d.spec.model_images)
              models[std::to_string(label)] = imgs;
            return json{{"kind", "finite_quotient"},
                        {"table", d.spec.table},
                        {"x", d.spec.x_images},
                        {"models", models}};
          },
          [](const PluginData& d) {
            return json{{"kind", "plugin"}, {"command", d.spec.command}};
          },
      },
      data_);
}

GroupOracle GroupOracle::from_json(const RelativePresentation& p, const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParseError("oracle needs a \"kind\"");
  const auto kind = j["kind"].get<std::string>();
  auto model_map = [&](auto tag) {
    using T = decltype(tag);
    std::map<int, T> out;
    if (!j.contains("models")) return out;
    if (!j["models"].is_object()) throw ParseError("oracle \"models\" must be an object");
    for (const auto& [key, val] : j["models"].items()) {
      int label = 0;
      try {
        label = std::stoi(key);
      } catch (const std::exception&) {
        throw ParseError("oracle model key '" + key + "' is not a label");
      }
      try {
        out[label] = val.template get<T>();
      } catch (const json::exception&) {
        throw ParseError("oracle model images malformed for label " + key);
      }
    }
    return out;
  };
  try {
    if (kind == "free_product") return free_product();
    if (kind == "integer_quotient") {
      IntegerQuotientSpec spec;
      if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw ParseError("integer_quotient needs integer \"dim\"");
      spec.dim = j["dim"].get<int>();
      if (j.contains("x")) spec.x_images = j["x"].get<std::map<std::string, IntVector>>();
      spec.model_images = model_map(std::vector<IntVector>{});
      return integer_quotient(p, std::move(spec));
    }
    if (kind == "finite_quotient") {
      FiniteQuotientSpec spec;
      if (!j.contains("table")) throw ParseError("finite_quotient needs \"table\"");
      spec.table = j["table"].get<std::vector<std::vector<int>>>();
      if (j.contains("x")) spec.x_images = j["x"].get<std::map<std::string, int>>();
      spec.model_images = model_map(std::vector<int>{});
      return finite_quotient(p, std::move(spec));
    }
    if (kind == "plugin") {
      if (!j.contains("command") || !j["command"].is_string())
        throw ParseError("plugin oracle needs a \"command\" string");
      return plugin({j["command"].get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("oracle data malformed: ") + e.what());
  }
  throw ParseError("unknown oracle kind '" + kind + "'");
}

Word normal_form(const RelativePresentation& p, const GroupOracle& o, const Word& w) {
  return o.normal_form(p, w);
}

bool equal(const RelativePresentation& p, const GroupOracle& o, const Word& u,
           const Word& v) {
  std::vector<Word> both{u, v};
  auto nf = o.normal_forms(p, both);
  return nf[0] == nf[1];
}

PresentationDocument parse_document(std::string_view text) {
  auto j = parse_json_text(text);
  PresentationDocument doc{presentation_from_json(j), std::nullopt};
  if (j.contains("oracle")) {
    doc.oracle = GroupOracle::from_json(doc.presentation, j["oracle"]);
    doc.oracle->validate(doc.presentation);
  }
  return doc;
}

json document_to_json(const PresentationDocument& doc) {
  auto j = presentation_to_json(doc.presentation);
  if (doc.oracle) j["oracle"] = doc.oracle->to_json(doc.presentation);
  return j;
}

}  // namespace relhyp
