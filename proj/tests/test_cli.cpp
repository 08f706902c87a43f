#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kanrw/cli.hpp"

using kanrw::cli::json;

namespace {

struct RunResult {
  int status = 0;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult res;
  res.status = kanrw::cli::run(args, out, err);
  res.out = out.str();
  res.err = err.str();
  return res;
}

std::string data(const std::string& name) {
  return std::string(KANRW_DATA_DIR) + "/" + name;
}

json out_json(const RunResult& r) { return json::parse(r.out); }

std::string temp_file(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("knuth-bendix completion subcommand") {
  auto r = run({"kb", "complete", data("group_abc.json")});
  CHECK(r.status == 0);
  CHECK(r.out.find("complete") != std::string::npos);
  CHECK(r.out.find("rules: 24") != std::string::npos);

  SECTION("byte-identical on repeated runs") {
    auto again = run({"kb", "complete", data("group_abc.json")});
    CHECK(again.out == r.out);
    CHECK(again.status == r.status);
  }

  SECTION("json output round-trips") {
    auto j = run({"kb", "complete", data("group_abc.json"), "--format",
                  "json"});
    REQUIRE(j.status == 0);
    json doc = out_json(j);
    CHECK(doc.at("complete").get<bool>());
    CHECK(doc.at("rules").size() == 24);
    CHECK(json::parse(doc.dump(2)) == doc);
  }

  SECTION("exhausted budgets return status 4 with partial output") {
    auto b = run({"kb", "complete", data("group_abc.json"), "--max-passes",
                  "1"});
    CHECK(b.status == 4);
    CHECK(b.out.find("incomplete") != std::string::npos);
    CHECK(b.out.find("rules:") != std::string::npos);
  }
}

TEST_CASE("kan subcommands") {
  SECTION("complete lists the nine rules") {
    auto r = run({"kan", "complete", data("kan_main.json")});
    CHECK(r.status == 0);
    CHECK(r.out.find("rules: 9 (8 term, 1 path)") != std::string::npos);
    json doc = out_json(
        run({"kan", "complete", data("kan_main.json"), "--format", "json"}));
    CHECK(doc.at("rules").at("t_rules").size() == 8);
    CHECK(doc.at("rules").at("p_rules").size() == 1);
  }

  SECTION("enumerate reports overflow as data with status 0") {
    auto r = run({"kan", "enumerate", data("kan_main.json"), "--limit",
                  "1000"});
    CHECK(r.status == 0);
    CHECK(r.out.find("enumeration limit exceeded") != std::string::npos);
    json doc = out_json(run({"kan", "enumerate", data("kan_main.json"),
                             "--format", "json"}));
    CHECK(doc.at("overflow").get<bool>());
    CHECK(doc.at("status").get<int>() == 0);
  }

  SECTION("enumerate of a finite extension") {
    auto r = run({"kan", "enumerate", data("kan_moore.json"), "--format",
                  "json"});
    REQUIRE(r.status == 0);
    json doc = out_json(r);
    CHECK_FALSE(doc.at("overflow").get<bool>());
    CHECK(doc.at("total").get<int>() == 14);
    CHECK(doc.at("epsilon").size() == 5);
  }

  SECTION("regex for an object") {
    auto r = run({"kan", "regex", data("kan_main.json"), "--object", "B1"});
    CHECK(r.status == 0);
    CHECK(r.out.find("regex(B1) = ") != std::string::npos);
    auto again =
        run({"kan", "regex", data("kan_main.json"), "--object", "B1"});
    CHECK(again.out == r.out);
    auto bad =
        run({"kan", "regex", data("kan_main.json"), "--object", "nope"});
    CHECK(bad.status == 3);
  }
}

TEST_CASE("special-case builders") {
  SECTION("cosets of <b> in the abc group") {
    json doc = out_json(
        run({"coset", data("coset_b.json"), "--format", "json"}));
    CHECK(doc.at("rules").at("t_rules").size() +
              doc.at("rules").at("p_rules").size() ==
          29);
    std::vector<std::string> reps = doc.at("cosets");
    CHECK(reps == std::vector<std::string>{"H|id", "H|c"});
  }

  SECTION("cosets of <c^2> in the abc group") {
    json doc = out_json(
        run({"coset", data("coset_c2.json"), "--format", "json"}));
    CHECK(doc.at("rules").at("t_rules").size() +
              doc.at("rules").at("p_rules").size() ==
          32);
  }

  SECTION("orbit representatives") {
    json doc = out_json(
        run({"orbit", data("orbit_s3.json"), "--format", "json"}));
    std::vector<std::string> reps = doc.at("orbits");
    CHECK(reps == std::vector<std::string>{"v|id", "y|id"});
  }

  SECTION("conjugacy classes of the quaternion group") {
    json doc = out_json(
        run({"conjugacy", data("conjugacy_q8.json"), "--format", "json"}));
    CHECK(doc.at("classes").size() == 5);
  }

  SECTION("coequaliser colimit") {
    json doc = out_json(
        run({"colimit", data("colimit_coequaliser.json"), "--format",
             "json"}));
    CHECK(doc.at("colimit").size() == 3);
  }
}

TEST_CASE("machine subcommands") {
  SECTION("moore table") {
    json doc = out_json(
        run({"moore", data("kan_moore.json"), "--format", "json"}));
    CHECK(doc.at("states").get<int>() == 16);
    CHECK(doc.at("outputs").size() == 14);
    CHECK(doc.at("delta").size() == 16 * doc.at("alphabet").size());
  }

  SECTION("moore refuses nothing: infinite extensions overflow with status 0") {
    auto r = run({"moore", data("kan_main.json")});
    CHECK(r.status == 0);
    CHECK(r.out.find("enumeration limit exceeded") != std::string::npos);
  }

  SECTION("moore dot dump") {
    auto r = run({"moore", data("kan_moore.json"), "--dot"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("digraph moore {", 0) == 0);
  }

  SECTION("cayley table") {
    json doc = out_json(
        run({"cayley", data("cayley_d8.json"), "--format", "json"}));
    CHECK(doc.at("vertices").size() == 8);
    CHECK(doc.at("edges").size() == 16);
    CHECK(doc.at("generator_order").at("a").get<int>() == 4);
    CHECK(doc.at("generator_order").at("b").get<int>() == 2);
  }

  SECTION("cayley dot dump") {
    auto r = run({"cayley", data("cayley_d8.json"), "--dot"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("digraph cayley {", 0) == 0);
  }
}

TEST_CASE("noncommutative algebra subcommands") {
  SECTION("the Hecke basis is its own completion") {
    json doc = out_json(
        run({"ncgb", data("ncgb_hecke.json"), "--format", "json"}));
    CHECK(doc.at("complete").get<bool>());
    CHECK(doc.at("basis").size() == 3);
    CHECK(doc.at("dimension").get<int>() == 6);
    CHECK(doc.at("monomials").size() == 6);
  }

  SECTION("infinite-dimensional quotient reports its language") {
    json doc = out_json(
        run({"ncgb", data("ncgb_infinite.json"), "--format", "json"}));
    CHECK(doc.at("complete").get<bool>());
    CHECK(doc.at("dimension").get<std::string>() == "infinite");
    CHECK_FALSE(
        doc.at("irreducible_language").get<std::string>().empty());
  }

  SECTION("reduction with its trace") {
    json doc = out_json(
        run({"ncreduce", data("ncreduce_hecke.json"), "--format", "json"}));
    CHECK(doc.at("normal_form").get<std::string>() ==
          "7/9 e1*e2*e1 + 2/9 e1");
    CHECK(doc.at("steps").get<int>() == doc.at("trace").size());
    CHECK(doc.at("trace").size() > 0);
  }

  SECTION("bad polynomial text is a parse error") {
    auto path = temp_file("kanrw_bad_poly.json",
                          R"({"generators":["a"],"polynomials":["a**&"]})");
    auto r = run({"ncgb", path});
    CHECK(r.status == 2);
  }
}

TEST_CASE("idrel subcommand") {
  SECTION("symmetric group record") {
    json doc = out_json(
        run({"idrel", data("idrel_s3.json"), "--format", "json"}));
    CHECK(doc.at("free").size() == 2);
    CHECK(doc.at("K").size() == 6);
    CHECK(doc.at("elF").size() == 6);
    CHECK(doc.at("idents").size() == 18);
    CHECK(doc.at("isIdsRecord").get<bool>());
  }

  SECTION("quaternion record needs inverse elimination") {
    auto refused = run({"idrel", data("idrel_q8.json")});
    CHECK(refused.status == 3);
    json doc = out_json(run({"idrel", data("idrel_q8.json"),
                             "--eliminate-inverses", "--format", "json"}));
    CHECK(doc.at("rels").at("t").get<std::string>() == "a b a b b b");
    CHECK(doc.at("K").size() == 6);
    CHECK(doc.at("idents").size() == 32);
    CHECK(doc.at("isIdsRecord").get<bool>());
  }

  SECTION("text report is deterministic") {
    auto a = run({"idrel", data("idrel_s3.json")});
    auto b = run({"idrel", data("idrel_s3.json")});
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("isIdsRecord: true") != std::string::npos);
  }
}

TEST_CASE("exit-status contract") {
  SECTION("unreadable and malformed input is a parse error") {
    CHECK(run({"kb", "complete", "/nonexistent.json"}).status == 2);
    auto path = temp_file("kanrw_bad.json", "{ not json");
    CHECK(run({"kb", "complete", path}).status == 2);
    auto missing = temp_file("kanrw_missing.json", R"({"generators":["a"]})");
    CHECK(run({"coset", missing}).status == 2);  // no subgroup key
  }

  SECTION("semantic problems are validation errors") {
    auto path = temp_file(
        "kanrw_badlabel.json",
        R"({"generators":["a"],"relations":[[["z"],["a"]]]})");
    CHECK(run({"kb", "complete", path}).status == 3);
    auto neg = run({"kb", "complete", data("group_abc.json"), "--max-rules",
                    "0"});
    CHECK(neg.status == 3);
  }

  SECTION("bad command lines are parse errors") {
    CHECK(run({"frobnicate"}).status == 2);
    CHECK(run({"kb", "complete"}).status == 2);  // missing input
    CHECK(run({"kan", "regex", data("kan_main.json")}).status == 2);
  }

  SECTION("help succeeds") {
    CHECK(run({"--help"}).status == 0);
  }
}

TEST_CASE("enumeration limit environment variable") {
  setenv("KANRW_LIMIT", "5", 1);
  auto r = run({"kan", "enumerate", data("kan_moore.json"), "--format",
                "json"});
  CHECK(out_json(r).at("overflow").get<bool>());
  CHECK(r.status == 0);

  // an explicit --limit beats the environment
  auto wide = run({"kan", "enumerate", data("kan_moore.json"), "--limit",
                   "1000", "--format", "json"});
  CHECK_FALSE(out_json(wide).at("overflow").get<bool>());
  unsetenv("KANRW_LIMIT");
}
