// Reference normal-form plugin for free products of a free group with Z^d
// factors: reads one JSON word per line, writes its syllable normal form.
#include <iostream>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

bool is_zero(const json& elem) {
  for (const auto& v : elem)
    if (v.get<long long>() != 0) return false;
  return true;
}

json reduce(const json& word) {
  json out = json::array();
  for (const auto& l : word) {
    if (!out.empty()) {
      auto& last = out.back();
      if (l.contains("x") && last.contains("x") && last["x"] == l["x"] &&
          last["sign"].get<int>() == -l["sign"].get<int>()) {
        out.erase(out.size() - 1);
        continue;
      }
      if (l.contains("h") && last.contains("h") && last["h"]["lambda"] == l["h"]["lambda"]) {
        auto& e = last["h"]["elem"];
        for (std::size_t i = 0; i < e.size(); ++i)
          e[i] = e[i].get<long long>() + l["h"]["elem"][i].get<long long>();
        if (is_zero(e)) out.erase(out.size() - 1);
        continue;
      }
    }
    json copy = l;
    if (copy.contains("x") && !copy.contains("sign")) copy["sign"] = 1;
    out.push_back(copy);
  }
  return out;
}

}  // namespace

int main() {
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    std::cout << reduce(json::parse(line)).dump() << '\n';
  }
  return 0;
}
