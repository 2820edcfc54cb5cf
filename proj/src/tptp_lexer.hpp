#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tabhol/tptp.hpp"

namespace tabhol::detail {

enum class TokKind {
    LowerWord,
    UpperWord,
    SingleQuoted,
    DollarWord,
    DollarDollarWord,
    DistinctObject,
    Number,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Colon,
    Op,
    End,
};

struct Token {
    TokKind kind;
    std::string text; // unquoted content for quoted kinds
    SourceLoc loc;
};

/// Tokenizes THF text, dropping `%` line comments and `/* */` blocks.
std::vector<Token> tokenize(std::string_view text);

} // namespace tabhol::detail
