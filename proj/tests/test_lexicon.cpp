#include "doctest.h"

#include <zlib.h>

#include "annopipe/error.hpp"
#include "annopipe/lexicon.hpp"
#include "synth.hpp"
#include "tempdir.hpp"

using namespace annopipe;

namespace {

const char* kSmall =
    "hoče\thoteti\tVmpr3s\t120\n"
    "šel\titi\tVmep-sm\t80\n"
    "človek\tčlovek\tNcmsn\t300\n"
    "je\tbiti\tVa-r3s\t900\n"
    "je\ton\tPp3fsa--y\t40\n"
    "kdo\tkdo\tPq-msn\t30\n"
    "v\tv\tSl\t500\n"
    "in\tin\tCc\t700\n"
    "da\tda\tCs\t300\n"
    "ne\tne\tQ\t200\n"
    "lev\tlev\tNcmsn\t5\n"
    "lev\tlev\tAgpmsnn\t5\n"
    "lev\tleva\tNcfpg\t5\n";

}  // namespace

TEST_SUITE("lexicon") {
  TEST_CASE("lookup by form and full XPOS") {
    auto lex = Lexicon::parse(kSmall);
    CHECK(lex.entry_count() == 13);
    CHECK(lex.lookup_lemma("hoče", "Vmpr3s") == "hoteti");
    CHECK(lex.lookup_lemma("je", "Pp3fsa--y") == "on");
    CHECK(lex.lookup_lemma("je", "Ncmsn") == std::nullopt);
    CHECK(lex.lookup_lemma("hoce", "Vmpr3s") == std::nullopt);
    CHECK(lex.lookup_lemma("Človek", "Ncmsn") == "človek");
  }

  TEST_CASE("allowed tags and most frequent tag") {
    auto lex = Lexicon::parse(kSmall);
    CHECK(lex.allowed_tags("je") == std::set<std::string>{"Pp3fsa--y", "Va-r3s"});
    CHECK(lex.allowed_tags("neznano").empty());
    CHECK(lex.most_frequent_tag("je") == "Va-r3s");
    // Equal totals: the smallest tag wins.
    CHECK(lex.most_frequent_tag("lev") == "Agpmsnn");
    CHECK(lex.most_frequent_tag("zzz") == std::nullopt);
  }

  TEST_CASE("duplicate triples are merged with summed frequency") {
    auto lex = Lexicon::parse("a\ta\tX\t2\na\ta\tX\t3\n");
    CHECK(lex.entry_count() == 1);
    CHECK(lex.entries("a")->front().frequency == 5);
  }

  TEST_CASE("closed-class membership follows MULTEXT-East prefixes") {
    auto lex = Lexicon::parse(kSmall);
    CHECK(lex.in_closed_class(ClosedClass::pronoun, "kdo"));
    CHECK(lex.in_closed_class(ClosedClass::pronoun, "je"));
    CHECK(lex.in_closed_class(ClosedClass::adposition, "v"));
    CHECK(lex.in_closed_class(ClosedClass::coordinating_conjunction, "in"));
    CHECK(lex.in_closed_class(ClosedClass::subordinating_conjunction, "da"));
    CHECK(lex.in_closed_class(ClosedClass::particle, "ne"));
    CHECK_FALSE(lex.in_closed_class(ClosedClass::adposition, "lev"));
    CHECK(lex.closed_class_forms(ClosedClass::determiner).empty());
  }

  TEST_CASE("prefix table: longest prefix decides, custom lines parse") {
    auto p = ClosedClassPrefixes::parse({"cconj C", "sconj Cs", "determiner Pd"});
    CHECK(p.classify("Cs") == ClosedClass::subordinating_conjunction);
    CHECK(p.classify("Cc") == ClosedClass::coordinating_conjunction);
    CHECK(p.classify("Pd-msn") == ClosedClass::determiner);
    CHECK(p.classify("Pp1") == std::nullopt);
    CHECK_THROWS_AS(ClosedClassPrefixes::parse({"noun N"}), ConfigError);
  }

  TEST_CASE("malformed rows name the line") {
    try {
      Lexicon::parse("a\ta\tX\nb\tb\n");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(Lexicon::parse("a\ta\tX\tmany\n"), DataError);
  }

  TEST_CASE("to_text round-trips") {
    auto lex = Lexicon::parse(kSmall);
    auto again = Lexicon::parse(lex.to_text());
    CHECK(again.to_text() == lex.to_text());
    CHECK(again.entry_count() == lex.entry_count());
  }

  TEST_CASE("gzip and plain files load identically") {
    testing::TempDir dir;
    testing::SynthLanguage lang(200, 3);
    auto text = lang.lexicon_tsv();
    auto plain = dir.write("lex.tsv", text);
    auto gz = dir / "lex.tsv.gz";
    gzFile f = gzopen(gz.c_str(), "wb");
    REQUIRE(f);
    gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
    gzclose(f);
    auto a = Lexicon::load_file(plain);
    auto b = Lexicon::load_file(gz);
    CHECK(a.entry_count() == b.entry_count());
    CHECK(a.to_text() == b.to_text());
    CHECK_THROWS_AS(Lexicon::load_file(dir / "missing.tsv"), DataError);
  }

  TEST_CASE("synthetic lexicon is unambiguous per form") {
    testing::SynthLanguage lang(500, 5);
    auto lex = lang.lexicon();
    for (const auto& f : lang.forms()) CHECK_MESSAGE(lex.allowed_tags(f.form).size() == 1, f.form);
  }
}
