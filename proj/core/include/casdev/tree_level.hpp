#ifndef CASDEV_TREE_LEVEL_HPP
#define CASDEV_TREE_LEVEL_HPP

#include <string>

#include "casdev/errors.hpp"

namespace casdev {

// Height of the cascade tree: a finite level n >= 1 or the infinite tree.
class TreeLevel {
public:
    static TreeLevel finite(int n) {
        if (n < 1) throw DomainError("tree level must be >= 1");
        TreeLevel l;
        l.n_ = n;
        return l;
    }
    static TreeLevel infinite() { return TreeLevel{}; }

    bool is_infinite() const { return n_ == 0; }
    int n() const {
        if (is_infinite()) throw DomainError("infinite tree level has no finite n");
        return n_;
    }
    std::string str() const { return is_infinite() ? "inf" : std::to_string(n_); }

    friend bool operator==(const TreeLevel&, const TreeLevel&) = default;

private:
    TreeLevel() = default;
    int n_ = 0;
};

} // namespace casdev

#endif
