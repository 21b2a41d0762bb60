#pragma once

// Plain-text TBS lookup tables: a "columns" line with the allocation sizes,
// then one row per I_TBS. '-' marks undefined entries, '#' starts a comment.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nbiot/embedded_data.hpp"
#include "nbiot/error.hpp"

namespace nbiot {

// 64-bit FNV-1a, used to pin the shipped data files.
inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return out;
}

class TbsTable {
public:
    static TbsTable parse(std::string_view text, std::string_view source) {
        TbsTable t;
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        auto bad = [&](const std::string& why) {
            return ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": " + why);
        };
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::string head;
            if (!(ls >> head)) continue;
            if (head == "columns") {
                int v;
                while (ls >> v) t.columns_.push_back(v);
                if (t.columns_.empty()) throw bad("empty columns line");
                continue;
            }
            if (t.columns_.empty()) throw bad("row before columns line");
            int key = 0;
            try {
                key = std::stoi(head);
            } catch (const std::exception&) {
                throw bad("bad row key '" + head + "'");
            }
            if (key != static_cast<int>(t.rows_.size())) throw bad("rows must be consecutive from 0");
            std::vector<std::optional<int>> row;
            std::string cell;
            while (ls >> cell) {
                if (cell == "-") {
                    row.emplace_back();
                } else {
                    try {
                        row.emplace_back(std::stoi(cell));
                    } catch (const std::exception&) {
                        throw bad("bad cell '" + cell + "'");
                    }
                }
            }
            if (row.size() != t.columns_.size()) throw bad("row width does not match columns");
            t.rows_.push_back(std::move(row));
        }
        if (t.rows_.empty()) throw ConfigError(std::string(source) + ": no rows");
        return t;
    }

    const std::vector<int>& columns() const noexcept { return columns_; }
    int row_count() const noexcept { return static_cast<int>(rows_.size()); }

    std::optional<int> at(int itbs, int units) const {
        if (itbs < 0 || itbs >= row_count()) return std::nullopt;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i] == units) return rows_[static_cast<std::size_t>(itbs)][i];
        }
        return std::nullopt;
    }

    // Largest defined entry of a row and the allocation that carries it.
    std::pair<int, int> row_max(int itbs) const {
        const auto& row = rows_.at(static_cast<std::size_t>(itbs));
        std::pair<int, int> best{0, 0};
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] && *row[i] > best.first) best = {*row[i], columns_[i]};
        }
        return best;
    }

    // Smallest allocation whose TBS holds `bits`, if any.
    std::optional<int> min_units_for(int itbs, int bits) const {
        const auto& row = rows_.at(static_cast<std::size_t>(itbs));
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] && *row[i] >= bits) return columns_[i];
        }
        return std::nullopt;
    }

private:
    std::vector<int> columns_;
    std::vector<std::vector<std::optional<int>>> rows_;
};

inline const TbsTable& npusch_tbs_table() {
    static const TbsTable t = TbsTable::parse(embedded::kTbsNpusch, "tbs_npusch.txt");
    return t;
}

inline const TbsTable& npdsch_tbs_table() {
    static const TbsTable t = TbsTable::parse(embedded::kTbsNpdsch, "tbs_npdsch.txt");
    return t;
}

}  // namespace nbiot
