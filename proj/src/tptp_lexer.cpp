#include "tptp_lexer.hpp"

#include <array>
#include <cctype>

namespace tabhol::detail {

namespace {

// Longest operators first.
constexpr std::array<std::string_view, 29> kOperators = {
    "<=>", "<~>", "-->", "=>", "<=", "~|", "~&", "!=", "!!", "??", "@+", "@-", "!>", "?*", ":=",
    "<<", "~", "&", "|", "=", "!", "?", "^", "@", ">", "*", "+", "-", "#",
};

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            SourceLoc start{line, col};
            advance(2);
            while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) advance(1);
            if (i + 1 >= text.size()) throw SyntaxError("unterminated block comment", start);
            advance(2);
            continue;
        }

        SourceLoc loc{line, col};
        auto push = [&](TokKind k, std::string s, std::size_t len) {
            out.push_back(Token{k, std::move(s), loc});
            advance(len);
        };

        if (c == '\'' || c == '"') {
            std::string content;
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != c) {
                if (text[j] == '\\' && j + 1 < text.size()) ++j;
                content.push_back(text[j]);
                ++j;
            }
            if (j >= text.size()) throw SyntaxError("unterminated quoted token", loc);
            push(c == '\'' ? TokKind::SingleQuoted : TokKind::DistinctObject, std::move(content), j + 1 - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '$') {
            std::size_t j = i;
            TokKind kind = std::isupper(static_cast<unsigned char>(c)) ? TokKind::UpperWord : TokKind::LowerWord;
            if (c == '$') {
                ++j;
                kind = TokKind::DollarWord;
                if (j < text.size() && text[j] == '$') {
                    ++j;
                    kind = TokKind::DollarDollarWord;
                }
            }
            while (j < text.size() && is_alnum(text[j])) ++j;
            push(kind, std::string(text.substr(i, j - i)), j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '.' ||
                                       text[j] == '/')) {
                // stop at the annotated-formula terminator "." followed by non-digit
                if (text[j] == '.' && (j + 1 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[j + 1]))))
                    break;
                ++j;
            }
            push(TokKind::Number, std::string(text.substr(i, j - i)), j - i);
            continue;
        }
        switch (c) {
        case '(': push(TokKind::LParen, "(", 1); continue;
        case ')': push(TokKind::RParen, ")", 1); continue;
        case '[': push(TokKind::LBrack, "[", 1); continue;
        case ']': push(TokKind::RBrack, "]", 1); continue;
        case ',': push(TokKind::Comma, ",", 1); continue;
        case '.': push(TokKind::Dot, ".", 1); continue;
        default: break;
        }
        bool matched = false;
        for (std::string_view op : kOperators) {
            if (text.substr(i, op.size()) == op) {
                push(TokKind::Op, std::string(op), op.size());
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (c == ':') {
            push(TokKind::Colon, ":", 1);
            continue;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", loc);
    }
    out.push_back(Token{TokKind::End, "", SourceLoc{line, col}});
    return out;
}

} // namespace tabhol::detail
