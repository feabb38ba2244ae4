#include "testforge/util/xml.hpp"

#include <cctype>

namespace testforge::util {

const XmlNode* XmlNode::first(std::string_view child_name) const {
    for (const auto& child : children)
        if (child->name == child_name) return child.get();
    return nullptr;
}

std::vector<const XmlNode*> XmlNode::all(std::string_view child_name) const {
    std::vector<const XmlNode*> out;
    for (const auto& child : children)
        if (child->name == child_name) out.push_back(child.get());
    return out;
}

std::string XmlNode::attribute(std::string_view key, std::string_view fallback) const {
    auto it = attributes.find(std::string(key));
    return it == attributes.end() ? std::string(fallback) : it->second;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view doc) : doc_(doc) {}

    std::unique_ptr<XmlNode> parse() {
        skip_misc();
        auto root = parse_element();
        skip_misc();
        if (pos_ != doc_.size()) fail("trailing content after root element");
        return root;
    }

private:
    std::string_view doc_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) { throw XmlError(what, pos_); }

    bool eof() const { return pos_ >= doc_.size(); }
    char peek() const { return doc_[pos_]; }
    bool looking_at(std::string_view token) const {
        return doc_.substr(pos_, token.size()) == token;
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    // whitespace, comments, declarations and PIs between elements
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (looking_at("<!--")) {
                auto end = doc_.find("-->", pos_ + 4);
                if (end == std::string_view::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (looking_at("<?")) {
                auto end = doc_.find("?>", pos_ + 2);
                if (end == std::string_view::npos) fail("unterminated declaration");
                pos_ = end + 2;
            } else if (looking_at("<!DOCTYPE")) {
                auto end = doc_.find('>', pos_);
                if (end == std::string_view::npos) fail("unterminated doctype");
                pos_ = end + 1;
            } else {
                return;
            }
        }
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == '.' || c == ':') {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected a name");
        return std::string(doc_.substr(start, pos_ - start));
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                continue;
            }
            auto end = raw.find(';', i);
            if (end == std::string_view::npos) fail("unterminated entity");
            std::string_view entity = raw.substr(i + 1, end - i - 1);
            if (entity == "amp") out.push_back('&');
            else if (entity == "lt") out.push_back('<');
            else if (entity == "gt") out.push_back('>');
            else if (entity == "quot") out.push_back('"');
            else if (entity == "apos") out.push_back('\'');
            else if (!entity.empty() && entity[0] == '#') {
                int code = 0;
                try {
                    code = (entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X'))
                               ? std::stoi(std::string(entity.substr(2)), nullptr, 16)
                               : std::stoi(std::string(entity.substr(1)));
                } catch (...) { fail("bad character reference"); }
                if (code < 0 || code > 0x10FFFF) fail("character reference out of range");
                // encode as UTF-8
                if (code < 0x80) out.push_back(static_cast<char>(code));
                else if (code < 0x800) {
                    out.push_back(static_cast<char>(0xC0 | (code >> 6)));
                    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
                } else if (code < 0x10000) {
                    out.push_back(static_cast<char>(0xE0 | (code >> 12)));
                    out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
                } else {
                    out.push_back(static_cast<char>(0xF0 | (code >> 18)));
                    out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
                }
            } else {
                fail("unknown entity &" + std::string(entity) + ";");
            }
            i = end;
        }
        return out;
    }

    std::string parse_attr_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
        char quote = peek();
        ++pos_;
        std::size_t start = pos_;
        while (!eof() && peek() != quote) ++pos_;
        if (eof()) fail("unterminated attribute value");
        std::string value = decode_entities(doc_.substr(start, pos_ - start));
        ++pos_;
        return value;
    }

    std::unique_ptr<XmlNode> parse_element() {
        if (eof() || peek() != '<') fail("expected element");
        ++pos_;
        auto node = std::make_unique<XmlNode>();
        node->name = parse_name();

        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag for <" + node->name + ">");
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (looking_at("/>")) {
                pos_ += 2;
                return node;
            }
            std::string key = parse_name();
            skip_ws();
            if (eof() || peek() != '=') fail("expected '=' after attribute " + key);
            ++pos_;
            skip_ws();
            node->attributes[key] = parse_attr_value();
        }

        // content
        for (;;) {
            if (eof()) fail("missing </" + node->name + ">");
            if (looking_at("<![CDATA[")) {
                auto end = doc_.find("]]>", pos_ + 9);
                if (end == std::string_view::npos) fail("unterminated CDATA");
                node->text.append(doc_.substr(pos_ + 9, end - pos_ - 9));
                pos_ = end + 3;
            } else if (looking_at("<!--")) {
                auto end = doc_.find("-->", pos_ + 4);
                if (end == std::string_view::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (looking_at("</")) {
                pos_ += 2;
                std::string closing = parse_name();
                if (closing != node->name)
                    fail("mismatched </" + closing + ">, expected </" + node->name + ">");
                skip_ws();
                if (eof() || peek() != '>') fail("malformed closing tag");
                ++pos_;
                return node;
            } else if (peek() == '<') {
                node->children.push_back(parse_element());
            } else {
                std::size_t start = pos_;
                while (!eof() && peek() != '<') ++pos_;
                node->text.append(decode_entities(doc_.substr(start, pos_ - start)));
            }
        }
    }
};

} // namespace

std::unique_ptr<XmlNode> parse_xml(std::string_view document) {
    return Parser(document).parse();
}

} // namespace testforge::util
