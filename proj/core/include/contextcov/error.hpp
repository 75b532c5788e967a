#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contextcov {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when instruction text is not valid UTF-8.
class EncodingError : public Error {
public:
    explicit EncodingError(std::size_t offset)
        : Error("invalid UTF-8 at byte offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

enum class StoreErrorKind { missing_file, malformed, unsupported_version, invalid_descriptor, io };

class StoreError : public Error {
public:
    StoreError(StoreErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}

    StoreErrorKind kind() const noexcept { return kind_; }

private:
    StoreErrorKind kind_;
};

/// Two freshly extracted constraints share an identifier.
class ExtractionCollision : public Error {
public:
    explicit ExtractionCollision(std::string id)
        : Error("extraction collision: duplicate constraint id " + id), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// DIFF/UNSTAGED scopes requested outside a version-controlled tree.
class ScopeError : public Error {
public:
    using Error::Error;
};

class ProviderError : public Error {
public:
    using Error::Error;
};

class ShimError : public Error {
public:
    using Error::Error;
};

} // namespace contextcov
