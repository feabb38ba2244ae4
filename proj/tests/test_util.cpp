#include <doctest.h>

#include "testforge/util/files.hpp"
#include "testforge/util/sha256.hpp"
#include "testforge/util/strings.hpp"
#include "testforge/util/xml.hpp"

#include "support/temp_dir.hpp"

using namespace testforge;

TEST_CASE("sha256 matches the published test vectors") {
    CHECK(util::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(util::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(util::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // block-boundary length
    CHECK(util::sha256_hex(std::string(64, 'a')) ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

TEST_CASE("count_lines counts newline-delimited lines") {
    CHECK(util::count_lines("") == 0);
    CHECK(util::count_lines("a") == 1);
    CHECK(util::count_lines("a\n") == 1);
    CHECK(util::count_lines("a\nb") == 2);
    CHECK(util::count_lines("a\nb\n") == 2);
    CHECK(util::count_lines("\n\n") == 2);
}

TEST_CASE("contains_word_icase respects word boundaries") {
    CHECK(util::contains_word_icase("written in Java", "java"));
    CHECK(util::contains_word_icase("Write Python-based tests", "python"));
    CHECK_FALSE(util::contains_word_icase("a javascript project", "java"));
    CHECK_FALSE(util::contains_word_icase("pythonic style", "python"));
    CHECK(util::contains_word_icase("JAVA", "java"));
}

TEST_CASE("split_lines handles CRLF and a missing trailing newline") {
    auto lines = util::split_lines("a\r\nb\nc");
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "a");
    CHECK(lines[1] == "b");
    CHECK(lines[2] == "c");
}

TEST_CASE("strip_punct trims token punctuation") {
    CHECK(util::strip_punct("management,") == "management");
    CHECK(util::strip_punct("\"Library\".") == "Library");
    CHECK(util::strip_punct("...") == "");
}

TEST_CASE("path_within rejects escapes") {
    CHECK(util::path_within("/a/b", "/a/b/c.py"));
    CHECK(util::path_within("/a/b", "c/d.py"));
    CHECK_FALSE(util::path_within("/a/b", "../evil.py"));
    CHECK_FALSE(util::path_within("/a/b", "/a/other/file.py"));
    CHECK_FALSE(util::path_within("/a/b", "c/../../evil.py"));
}

TEST_CASE("xml parser reads a junit-style document") {
    const std::string doc = R"(<?xml version="1.0"?>
<testsuite tests="2">
  <!-- a comment -->
  <testcase classname="t" name="ok" time="0.5"/>
  <testcase classname="t" name="bad">
    <failure message="expected &lt;3&gt;"><![CDATA[trace > here]]></failure>
  </testcase>
</testsuite>)";
    auto root = util::parse_xml(doc);
    CHECK(root->name == "testsuite");
    CHECK(root->attribute("tests") == "2");
    auto cases = root->all("testcase");
    REQUIRE(cases.size() == 2);
    CHECK(cases[0]->attribute("name") == "ok");
    const auto* failure = cases[1]->first("failure");
    REQUIRE(failure != nullptr);
    CHECK(failure->attribute("message") == "expected <3>");
    CHECK(failure->text == "trace > here");
}

TEST_CASE("xml parser rejects malformed documents") {
    CHECK_THROWS_AS((void)util::parse_xml("<a><b></a>"), util::XmlError);
    CHECK_THROWS_AS((void)util::parse_xml("<a>"), util::XmlError);
    CHECK_THROWS_AS((void)util::parse_xml("<a attr=oops></a>"), util::XmlError);
    CHECK_THROWS_AS((void)util::parse_xml("<a></a><b></b>"), util::XmlError);
}

TEST_CASE("write_file then read_file round-trips and creates directories") {
    testing::TempDir tmp;
    auto path = tmp / "deep";
    util::write_file(path / "x.txt", "hello\n");
    auto content = util::read_file(path / "x.txt");
    REQUIRE(content.has_value());
    CHECK(*content == "hello\n");
}

TEST_CASE("find_executable locates binaries on PATH") {
    CHECK(util::find_executable("sh").has_value());
    CHECK_FALSE(util::find_executable("definitely-not-a-real-binary-name").has_value());
}
