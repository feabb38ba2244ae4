#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace testforge::util {

/// Element tree produced by parse_xml. Covers the subset emitted by JUnit
/// and JaCoCo writers: elements, attributes, text, CDATA, comments, and
/// character entities. No namespaces, DTDs, or processing beyond skipping
/// the declaration. Parse errors throw XmlError with byte offset context.
struct XmlNode {
    std::string name;
    std::map<std::string, std::string> attributes;
    std::vector<std::unique_ptr<XmlNode>> children;
    std::string text;  // concatenated character data directly under this node

    const XmlNode* first(std::string_view child_name) const;
    std::vector<const XmlNode*> all(std::string_view child_name) const;
    std::string attribute(std::string_view key, std::string_view fallback = "") const;
};

class XmlError : public std::runtime_error {
public:
    XmlError(const std::string& message, std::size_t offset)
        : std::runtime_error(message), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

std::unique_ptr<XmlNode> parse_xml(std::string_view document);

} // namespace testforge::util
