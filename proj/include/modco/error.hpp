#pragma once

#include <stdexcept>
#include <string>

namespace modco {

enum class ErrorKind {
    InvalidInput,
    Overflow,
    RankDeficient,
    NotNested,
    BadTransversal,
    DimensionMismatch,
    NotPrimitive,
    NotAdmissible,
    NoSeedFound,
    NotAnLSS,
    Diverged,
    BudgetExceeded,
    StateBudgetExceeded,
    NotNicelyGrowing,
    NotWellDefined,
    AdmissibilityPostcheckFailed,
    SyntaxError,
    SemanticError,
    UnknownName,
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::BadTransversal: return "BadTransversal";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::NoSeedFound: return "NoSeedFound";
    case ErrorKind::NotAnLSS: return "NotAnLSS";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorKind::NotNicelyGrowing: return "NotNicelyGrowing";
    case ErrorKind::NotWellDefined: return "NotWellDefined";
    case ErrorKind::AdmissibilityPostcheckFailed: return "AdmissibilityPostcheckFailed";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SemanticError: return "SemanticError";
    case ErrorKind::UnknownName: return "UnknownName";
    }
    return "Error";
}

// Every failure in the library is reported through this one type; callers
// dispatch on kind() (the CLI maps kinds to exit codes).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    bool is_budget() const {
        return kind_ == ErrorKind::BudgetExceeded || kind_ == ErrorKind::StateBudgetExceeded ||
               kind_ == ErrorKind::Diverged;
    }

private:
    ErrorKind kind_;
};

// Parse errors carry a position; line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, int line, int column, const std::string& msg)
        : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column), message_(msg) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    int column_;
    std::string message_;
};

}  // namespace modco
