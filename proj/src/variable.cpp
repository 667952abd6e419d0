#include "odekit/variable.hpp"

#include <mutex>
#include <unordered_map>
#include <vector>

namespace odekit {

namespace {

struct SymbolTable {
    std::mutex mutex;
    std::vector<std::string> names;
    std::unordered_map<std::string, std::uint32_t> index;
};

SymbolTable& table() {
    static SymbolTable t;
    return t;
}

}  // namespace

VariableId intern_symbol(const std::string& name) {
    SymbolTable& t = table();
    std::lock_guard<std::mutex> lock(t.mutex);
    auto it = t.index.find(name);
    if (it == t.index.end()) {
        std::uint32_t idx = static_cast<std::uint32_t>(t.names.size());
        if (idx > 0x0fffffffu) throw Error("symbol table full");
        t.names.push_back(name);
        it = t.index.emplace(name, idx).first;
    }
    return VariableId::from_code((2u << 28) | it->second);
}

std::string variable_name(VariableId v) {
    switch (v.kind()) {
        case VariableId::Kind::Base:
            return v.is_base_x() ? "x" : "y";
        case VariableId::Kind::Jet: {
            std::string s(1, letter_char(v.jet_letter()));
            if (v.jet_p() != 0 || v.jet_q() != 0) {
                s += "[" + std::to_string(v.jet_p()) + "," +
                     std::to_string(v.jet_q()) + "]";
            }
            return s;
        }
        case VariableId::Kind::Symbol: {
            SymbolTable& t = table();
            std::lock_guard<std::mutex> lock(t.mutex);
            std::uint32_t idx = v.symbol_index();
            if (idx < t.names.size()) return t.names[idx];
            return "sym" + std::to_string(idx);
        }
    }
    return "?";
}

}  // namespace odekit
