#pragma once
// Checks a JSON document against the key-level schema shipped in
// docs/report-schema.json.  Type expressions: base types (int, bool, string,
// number), "T?" for nullable, "array<T>", "object<T>" for value-typed maps,
// anything else is a named type from the schema's "types" table.  Keys not
// listed as required or optional are rejected.

#include <string>
#include <vector>

#include "json.hpp"

namespace schema {

using nlohmann::json;

inline void check_value(const json& types, const std::string& type, const json& v,
                        const std::string& path, std::vector<std::string>& problems);

inline void check_named(const json& types, const json& shape, const json& v,
                        const std::string& path, std::vector<std::string>& problems) {
    if (!v.is_object()) {
        problems.push_back(path + ": expected object");
        return;
    }
    const json& req = shape.value("required", json::object());
    const json& opt = shape.value("optional", json::object());
    for (auto it = req.begin(); it != req.end(); ++it) {
        if (!v.contains(it.key())) {
            problems.push_back(path + ": missing required key '" + it.key() + "'");
            continue;
        }
        check_value(types, it.value().get<std::string>(), v.at(it.key()),
                    path + "." + it.key(), problems);
    }
    for (auto it = v.begin(); it != v.end(); ++it) {
        if (req.contains(it.key())) continue;
        if (opt.contains(it.key())) {
            check_value(types, opt.at(it.key()).get<std::string>(), it.value(),
                        path + "." + it.key(), problems);
        } else {
            problems.push_back(path + ": unexpected key '" + it.key() + "'");
        }
    }
}

inline void check_value(const json& types, const std::string& type, const json& v,
                        const std::string& path, std::vector<std::string>& problems) {
    if (type.ends_with("?")) {
        if (v.is_null()) return;
        check_value(types, type.substr(0, type.size() - 1), v, path, problems);
        return;
    }
    if (type.starts_with("array<") && type.ends_with(">")) {
        if (!v.is_array()) {
            problems.push_back(path + ": expected array");
            return;
        }
        const std::string inner = type.substr(6, type.size() - 7);
        int i = 0;
        for (const auto& x : v)
            check_value(types, inner, x, path + "[" + std::to_string(i++) + "]", problems);
        return;
    }
    if (type.starts_with("object<") && type.ends_with(">")) {
        if (!v.is_object()) {
            problems.push_back(path + ": expected object");
            return;
        }
        const std::string inner = type.substr(7, type.size() - 8);
        for (auto it = v.begin(); it != v.end(); ++it)
            check_value(types, inner, it.value(), path + "." + it.key(), problems);
        return;
    }
    if (type == "int") {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            problems.push_back(path + ": expected int");
        return;
    }
    if (type == "bool") {
        if (!v.is_boolean()) problems.push_back(path + ": expected bool");
        return;
    }
    if (type == "string") {
        if (!v.is_string()) problems.push_back(path + ": expected string");
        return;
    }
    if (type == "number") {
        if (!v.is_number()) problems.push_back(path + ": expected number");
        return;
    }
    if (types.contains(type)) {
        check_named(types, types.at(type), v, path, problems);
        return;
    }
    problems.push_back(path + ": schema names unknown type '" + type + "'");
}

// Empty result means the document conforms to root_type.
inline std::vector<std::string> validate(const json& schema_doc, const std::string& root_type,
                                         const json& v) {
    std::vector<std::string> problems;
    check_value(schema_doc.at("types"), root_type, v, "$", problems);
    return problems;
}

}  // namespace schema
