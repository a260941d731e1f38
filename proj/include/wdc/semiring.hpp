#pragma once

// Semiring registry. Each instance supplies the two operations, the two
// constants, literal parsing/printing, the commutativity/idempotency flags
// the evaluator relies on, and a small-value sampler for property tests.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "wdc/value.hpp"

namespace wdc {

class Semiring {
public:
    virtual ~Semiring() = default;

    const std::string& name() const { return name_; }
    bool commutative() const { return commutative_; }
    bool idempotent() const { return idempotent_; }

    virtual Value zero() const = 0;
    virtual Value one() const = 0;
    virtual Value add(const Value& a, const Value& b) const = 0;
    virtual Value mul(const Value& a, const Value& b) const = 0;

    // Literal syntax is per-instance (see README); throws parse_error.
    virtual Value parse(const std::string& text) const = 0;
    virtual std::string print(const Value& v) const = 0;

    // Small random carrier element, biased to occasionally hit 0/1/infinity.
    virtual Value sample(std::mt19937& rng) const = 0;

protected:
    Semiring(std::string name, bool comm, bool idem)
        : name_(std::move(name)), commutative_(comm), idempotent_(idem) {}

private:
    std::string name_;
    bool commutative_;
    bool idempotent_;
};

using SemiringPtr = std::shared_ptr<const Semiring>;

// Accepts "name" or "name:param" (int_mod:7, langs:abc, tnorm_product:product).
// Unknown names and missing/invalid parameters throw invalid_argument_error.
SemiringPtr registry_lookup(const std::string& spec);

// Names in registration order, with a one-line description each.
std::vector<std::pair<std::string, std::string>> registry_list();

}  // namespace wdc
