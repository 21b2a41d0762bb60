#pragma once

// Signaling message catalog. One whitespace-separated record per line:
//
//   flow  order  name  direction  plane  channel  bytes
//
// `bytes` is an integer, or `data` / `ack` (payload + overhead from the
// traffic model), optionally followed by `+N` extra header bytes.
// Flow ids are segments: `<PROC>.mo`, `.mt`, `.mt_paging`, `.ul_ack`,
// `.dl_ack`, `.release`, `.tau`, plus the shared `ra` segment.

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nbiot/model.hpp"
#include "nbiot/tbs_table.hpp"

namespace nbiot {

enum class Plane { AS, NAS, DATA };

inline std::string_view to_string(Plane p) {
    switch (p) {
        case Plane::AS: return "AS";
        case Plane::NAS: return "NAS";
        case Plane::DATA: return "DATA";
    }
    return "?";
}

inline Plane parse_plane(std::string_view s) {
    if (s == "AS") return Plane::AS;
    if (s == "NAS") return Plane::NAS;
    if (s == "DATA") return Plane::DATA;
    throw ConfigError("unknown plane '" + std::string(s) + "'");
}

struct ByteSpec {
    enum class Base { Fixed, Data, Ack };
    Base base{Base::Fixed};
    int extra{0};

    int resolve(const TrafficModel& t) const {
        switch (base) {
            case Base::Fixed: return extra;
            case Base::Data: return t.data_bytes() + extra;
            case Base::Ack: return t.ack_bytes() + extra;
        }
        return extra;
    }

    std::string str() const {
        if (base == Base::Fixed) return std::to_string(extra);
        std::string out = base == Base::Data ? "data" : "ack";
        if (extra != 0) out += "+" + std::to_string(extra);
        return out;
    }

    bool operator==(const ByteSpec&) const = default;
};

inline ByteSpec parse_byte_spec(std::string_view s) {
    ByteSpec b;
    std::string_view rest = s;
    if (s.starts_with("data")) {
        b.base = ByteSpec::Base::Data;
        rest = s.substr(4);
    } else if (s.starts_with("ack")) {
        b.base = ByteSpec::Base::Ack;
        rest = s.substr(3);
    }
    if (b.base != ByteSpec::Base::Fixed) {
        if (rest.empty()) return b;
        if (rest.front() != '+') throw ConfigError("bad byte spec '" + std::string(s) + "'");
        rest.remove_prefix(1);
    }
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
        throw ConfigError("bad byte spec '" + std::string(s) + "'");
    }
    b.extra = std::stoi(std::string(rest));
    if (b.base == ByteSpec::Base::Fixed && b.extra <= 0) {
        throw ConfigError("fixed message size must be > 0");
    }
    return b;
}

struct CatalogRecord {
    std::string flow;
    int order{0};
    std::string name;
    Direction direction{Direction::UL};
    Plane plane{Plane::AS};
    ChannelKind channel{ChannelKind::NPUSCH};
    ByteSpec bytes;

    bool operator==(const CatalogRecord&) const = default;
};

class MessageCatalog {
public:
    static MessageCatalog parse(std::string_view text, std::string_view source = "catalog") {
        MessageCatalog cat;
        cat.checksum_ = fnv1a64(text);
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::vector<std::string> f;
            for (std::string w; ls >> w;) f.push_back(w);
            if (f.empty()) continue;
            auto where = std::string(source) + ":" + std::to_string(lineno) + ": ";
            if (f.size() != 7) throw ConfigError(where + "expected 7 fields, got " + std::to_string(f.size()));
            try {
                CatalogRecord r;
                r.flow = f[0];
                r.order = std::stoi(f[1]);
                r.name = f[2];
                r.direction = parse_direction(f[3]);
                r.plane = parse_plane(f[4]);
                r.channel = parse_channel(f[5]);
                r.bytes = parse_byte_spec(f[6]);
                const bool ok = (r.direction == Direction::UL && r.channel == ChannelKind::NPUSCH) ||
                                (r.direction == Direction::DL && r.channel == ChannelKind::NPDSCH);
                if (!ok) throw ConfigError("direction and channel disagree");
                cat.segments_[r.flow].push_back(std::move(r));
            } catch (const ConfigError& e) {
                throw ConfigError(where + e.what());
            } catch (const std::exception&) {
                throw ConfigError(where + "bad order field '" + f[1] + "'");
            }
        }
        for (auto& [flow, recs] : cat.segments_) {
            std::stable_sort(recs.begin(), recs.end(),
                             [](const auto& a, const auto& b) { return a.order < b.order; });
            for (std::size_t i = 1; i < recs.size(); ++i) {
                if (recs[i].order == recs[i - 1].order) {
                    throw ConfigError(std::string(source) + ": duplicate order " +
                                      std::to_string(recs[i].order) + " in " + flow);
                }
            }
        }
        return cat;
    }

    static MessageCatalog load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open catalog '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    bool has(const std::string& flow) const { return segments_.count(flow) != 0; }

    const std::vector<CatalogRecord>& segment(const std::string& flow) const {
        auto it = segments_.find(flow);
        if (it == segments_.end()) throw ConfigError("catalog has no flow '" + flow + "'");
        return it->second;
    }

    std::uint64_t checksum() const noexcept { return checksum_; }

private:
    std::map<std::string, std::vector<CatalogRecord>> segments_;
    std::uint64_t checksum_{0};
};

inline const MessageCatalog& builtin_catalog() {
    static const MessageCatalog c = MessageCatalog::parse(embedded::kMessageCatalog, "message_catalog.txt");
    return c;
}

}  // namespace nbiot
