#include "wdc/structure.hpp"

#include <json.hpp>

#include "wdc/errors.hpp"

namespace wdc {

int Signature::arity_of(const std::string& name) const {
    for (const auto& [r, l] : relations)
        if (r == name) return l;
    return -1;
}

const Relation& Structure::relation(const std::string& name) const {
    for (size_t i = 0; i < sig.relations.size(); ++i)
        if (sig.relations[i].first == name) return relations[i];
    throw invalid_argument_error("no relation '" + name + "' in signature");
}

void Structure::validate() const {
    if (n < 1) throw invalid_argument_error("universe must have at least one element");
    if (relations.size() != sig.relations.size())
        throw invalid_argument_error("relation list does not match signature");
    for (size_t i = 0; i < relations.size(); ++i) {
        int l = sig.relations[i].second;
        if (l < 0) throw invalid_argument_error("negative arity in signature");
        for (const auto& t : relations[i]) {
            if ((int)t.size() != l)
                throw invalid_argument_error("tuple arity mismatch in '" + sig.relations[i].first + "'");
            for (int e : t)
                if (e < 0 || e >= n)
                    throw invalid_argument_error("tuple element out of universe range");
        }
    }
}

uint64_t pow_checked(int n, int l) {
    if (n < 1 || l < 0) throw invalid_argument_error("pow_checked needs n >= 1, l >= 0");
    uint64_t r = 1;
    for (int i = 0; i < l; ++i) {
        if (r > (uint64_t(1) << 62) / (uint64_t)n)
            throw cap_exceeded("n^l exceeds the representable tuple count");
        r *= (uint64_t)n;
    }
    return r;
}

std::vector<Tuple> tuples_lex(int n, int l) {
    uint64_t total = pow_checked(n, l);
    if (total > (uint64_t(1) << 26)) throw cap_exceeded("tuple enumeration too large");
    std::vector<Tuple> out;
    out.reserve(total);
    Tuple t(l, 0);
    for (uint64_t i = 0; i < total; ++i) {
        out.push_back(t);
        for (int j = l - 1; j >= 0; --j) {
            if (++t[j] < n) break;
            t[j] = 0;
        }
    }
    return out;
}

uint64_t tuple_rank(const Tuple& t, int n) {
    uint64_t r = 0;
    for (int e : t) {
        if (e < 0 || e >= n) throw invalid_argument_error("tuple element out of range");
        r = r * (uint64_t)n + (uint64_t)e;
    }
    return r;
}

Tuple tuple_unrank(uint64_t r, int n, int l) {
    Tuple t(l, 0);
    for (int i = l - 1; i >= 0; --i) {
        t[i] = (int)(r % (uint64_t)n);
        r /= (uint64_t)n;
    }
    if (r != 0) throw invalid_argument_error("rank out of range");
    return t;
}

namespace {

std::string encode_relation(const Relation& rel, int n, int l) {
    uint64_t len = pow_checked(n, l);
    if (len > (uint64_t(1) << 26)) throw cap_exceeded("encoding block too large");
    std::string block(len, '0');
    for (const auto& t : rel) {
        if ((int)t.size() != l) throw invalid_argument_error("tuple arity mismatch in encode");
        block[tuple_rank(t, n)] = '1';
    }
    return block;
}

}  // namespace

std::string encode(const Structure& a, const std::vector<FreeValue>& frees) {
    a.validate();
    std::string out;
    if (a.sig.relations.empty()) {
        out.append((size_t)a.n, '0');
    } else {
        for (size_t i = 0; i < a.sig.relations.size(); ++i)
            out += encode_relation(a.relations[i], a.n, a.sig.relations[i].second);
    }
    for (const auto& fv : frees) {
        if (fv.is_relation) {
            out += encode_relation(fv.rel, a.n, fv.arity);
        } else {
            if (fv.element < 0 || fv.element >= a.n)
                throw invalid_argument_error("free element out of universe range");
            std::string block((size_t)a.n, '0');
            block[fv.element] = '1';
            out += block;
        }
    }
    return out;
}

Structure decode(const std::string& bits, const Signature& sig, int n) {
    if (n < 1) throw invalid_argument_error("decode needs n >= 1");
    for (char c : bits)
        if (c != '0' && c != '1') throw parse_error("encoding must be a bitstring");
    Structure a;
    a.n = n;
    a.sig = sig;
    size_t pos = 0;
    if (sig.relations.empty()) {
        if (bits.size() != (size_t)n)
            throw parse_error("empty-signature encoding must have length n");
        return a;
    }
    for (const auto& [name, l] : sig.relations) {
        uint64_t len = pow_checked(n, l);
        if (pos + len > bits.size()) throw parse_error("encoding too short for '" + name + "'");
        Relation rel;
        for (uint64_t m = 0; m < len; ++m)
            if (bits[pos + m] == '1') rel.insert(tuple_unrank(m, n, l));
        a.relations.push_back(std::move(rel));
        pos += len;
    }
    if (pos != bits.size()) throw parse_error("encoding longer than the signature requires");
    return a;
}

SubsetStar::SubsetStar(int n_, int l_, int max_base) : n(n_), l(l_) {
    base = pow_checked(n, l);
    if (base > (uint64_t)max_base)
        throw cap_exceeded("relation quantifier base " + std::to_string(base) +
                           " exceeds the enumeration cap " + std::to_string(max_base));
    count = uint64_t(1) << base;
}

uint64_t mask_from_relation(const Relation& rel, int n) {
    uint64_t mask = 0;
    for (const auto& t : rel) {
        uint64_t r = tuple_rank(t, n);
        if (r >= 62) throw cap_exceeded("relation too large for mask representation");
        mask |= uint64_t(1) << r;
    }
    return mask;
}

uint64_t subset_position(const Relation& rel, int n, int l) {
    for (const auto& t : rel)
        if ((int)t.size() != l) throw invalid_argument_error("subset arity mismatch");
    (void)pow_checked(n, l);
    return mask_from_relation(rel, n);
}

Relation subset_from_mask(uint64_t mask, int n, int l) {
    Relation rel;
    for (int r = 0; r < 62; ++r)
        if (mask & (uint64_t(1) << r)) rel.insert(tuple_unrank((uint64_t)r, n, l));
    return rel;
}

Structure load_structure_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw parse_error(std::string("structure JSON: ") + e.what());
    }
    Structure a;
    if (!j.contains("universe") || !j["universe"].is_number_integer())
        throw parse_error("structure JSON needs an integer 'universe'");
    a.n = j["universe"].get<int>();
    if (j.contains("signature")) {
        for (auto& [name, ar] : j["signature"].items()) {
            if (!ar.is_number_integer()) throw parse_error("arity of '" + name + "' must be an integer");
            a.sig.relations.emplace_back(name, ar.get<int>());
        }
    }
    a.relations.resize(a.sig.relations.size());
    if (j.contains("relations")) {
        for (auto& [name, tuples] : j["relations"].items()) {
            int idx = -1;
            for (size_t i = 0; i < a.sig.relations.size(); ++i)
                if (a.sig.relations[i].first == name) idx = (int)i;
            if (idx < 0) throw parse_error("relation '" + name + "' not in signature");
            for (auto& t : tuples) {
                Tuple tup;
                for (auto& e : t) tup.push_back(e.get<int>());
                a.relations[idx].insert(tup);
            }
        }
    }
    a.validate();
    return a;
}

std::string save_structure_json(const Structure& a) {
    nlohmann::json j;
    j["universe"] = a.n;
    j["signature"] = nlohmann::json::object();
    j["relations"] = nlohmann::json::object();
    for (size_t i = 0; i < a.sig.relations.size(); ++i) {
        j["signature"][a.sig.relations[i].first] = a.sig.relations[i].second;
        nlohmann::json tuples = nlohmann::json::array();
        for (const auto& t : a.relations[i]) tuples.push_back(t);
        j["relations"][a.sig.relations[i].first] = tuples;
    }
    return j.dump(2);
}

std::vector<Structure> all_structures(const Signature& sig, int n, int max_base) {
    std::vector<Structure> out;
    std::vector<SubsetStar> ranges;
    uint64_t total = 1;
    for (const auto& [name, l] : sig.relations) {
        ranges.emplace_back(n, l, max_base);
        if (total > (uint64_t(1) << 30) / std::max<uint64_t>(ranges.back().count, 1))
            throw cap_exceeded("structure enumeration too large");
        total *= ranges.back().count;
    }
    for (uint64_t idx = 0; idx < total; ++idx) {
        Structure a;
        a.n = n;
        a.sig = sig;
        uint64_t rest = idx;
        for (size_t i = 0; i < sig.relations.size(); ++i) {
            uint64_t mask = rest % ranges[i].count;
            rest /= ranges[i].count;
            a.relations.push_back(subset_from_mask(mask, n, sig.relations[i].second));
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace wdc
