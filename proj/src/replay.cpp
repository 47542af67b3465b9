#include "kad/replay.hpp"

#include <fstream>
#include <sstream>

#include "kad/errors.hpp"
#include "kad/serialization.hpp"

namespace kad {

std::vector<InstanceRecord> load_replay(std::istream& in) {
    std::vector<InstanceRecord> records;
    std::string line;
    int line_no = 0;
    int next_step = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            records.push_back(instance_from_json(j, next_step));
        } catch (const SchemaError& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
        ++next_step;
        if (records.size() > 1 && records.back().p.size() != records.front().p.size())
            throw InconsistentVocab("line " + std::to_string(line_no) +
                                    ": |V| differs from the first record");
    }
    return records;
}

std::vector<InstanceRecord> load_replay(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open replay file: " + path.string());
    return load_replay(in);
}

void serialize_replay(const std::vector<InstanceRecord>& records, std::ostream& out) {
    for (const auto& rec : records) out << to_json(rec).dump() << "\n";
}

} // namespace kad
