// Copyright 2026 The addrmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "addrmatch/corpus.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "addrmatch/error.h"

namespace addrmatch {
namespace {

const std::filesystem::path kFixtures = ADDRMATCH_FIXTURES;

ErrorCode code_of(std::string_view bytes, CorpusFormat fmt) {
  try {
    parse_corpus(bytes, fmt);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIo;
}

TEST(Corpus, CsvRowWithAllColumnsIsVerbatim) {
  const Corpus c = parse_corpus(
      "name,streetName,city,state,country,zipCode,extnZip,shortID,Address\n"
      "ACME,1 Main St,Omaha,NE,USA,68137,1234,X1,\"ACME, 1 Main St, Omaha\"\n",
      CorpusFormat::kCsv);
  ASSERT_EQ(c.size(), 1u);
  const AddressRecord& r = c.records[0];
  EXPECT_EQ(r.name, "ACME");
  EXPECT_EQ(r.street_name, "1 Main St");
  EXPECT_EQ(r.city, "Omaha");
  EXPECT_EQ(r.state, "NE");
  EXPECT_EQ(r.country, "USA");
  EXPECT_EQ(r.zip_code, "68137");
  EXPECT_EQ(r.extn_zip, "1234");
  EXPECT_EQ(r.short_id, "X1");
  EXPECT_EQ(r.record_id, "X1");
  EXPECT_EQ(r.full_address, "ACME, 1 Main St, Omaha");
}

TEST(Corpus, MissingAddressIsJoined) {
  const Corpus c = parse_corpus(
      R"({"name":"A","streetName":"B","city":"C","state":"D","zipCode":"1","country":"X"})",
      CorpusFormat::kJsonl);
  EXPECT_EQ(c.records[0].full_address, "A, B, C, D, 1, X");
}

TEST(Corpus, JoinSkipsEmptyFields) {
  AddressRecord r;
  r.name = " A ";
  r.city = "C";
  r.zip_code = "9";
  EXPECT_EQ(join_full_address(r), "A, C, 9");
}

TEST(Corpus, AllEmptyRowIsMalformed) {
  EXPECT_EQ(code_of("name,city\nA,B\n,\n", CorpusFormat::kCsv), ErrorCode::kMalformedRow);
  EXPECT_EQ(code_of(R"({"name":"","city":null})", CorpusFormat::kJsonl),
            ErrorCode::kMalformedRow);
}

TEST(Corpus, MalformedRowEchoesLine) {
  try {
    parse_corpus("name,city\nA,B\nC,D,E\n", CorpusFormat::kCsv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedRow);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("C,D,E"), std::string::npos);
  }
}

TEST(Corpus, Errors) {
  EXPECT_EQ(code_of("", CorpusFormat::kCsv), ErrorCode::kEmptyFile);
  EXPECT_EQ(code_of("  \n", CorpusFormat::kJsonl), ErrorCode::kEmptyFile);
  EXPECT_EQ(code_of("name,phone\nA,1\n", CorpusFormat::kCsv), ErrorCode::kUnknownColumn);
  EXPECT_EQ(code_of(R"({"name":"A","phone":"1"})", CorpusFormat::kJsonl),
            ErrorCode::kUnknownColumn);
  EXPECT_EQ(code_of("name\n\"A\n", CorpusFormat::kCsv), ErrorCode::kMalformedRow);
  EXPECT_EQ(code_of("[1,2]", CorpusFormat::kJsonl), ErrorCode::kMalformedRow);
  EXPECT_EQ(code_of("shortID,name\nA,x\nA,y\n", CorpusFormat::kCsv),
            ErrorCode::kMalformedRow);
}

TEST(Corpus, QuotedCsvFields) {
  const Corpus c = parse_corpus(
      "\xEF\xBB\xBFName,City\r\n\"Smith, \"\"Jr\"\"\",\"New\nYork\"\r\n", CorpusFormat::kCsv);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.records[0].name, "Smith, \"Jr\"");
  EXPECT_EQ(c.records[0].city, "New\nYork");
}

TEST(Corpus, OrdinalIdsWhenShortIdMissing) {
  const Corpus c = parse_corpus("name\nA\nB\n", CorpusFormat::kCsv);
  EXPECT_EQ(c.records[0].record_id, "000001");
  EXPECT_EQ(c.records[1].record_id, "000002");
}

TEST(Corpus, FixtureFormatsAgree) {
  const Corpus a = ingest(kFixtures / "sample_corpus.jsonl");
  const Corpus b = ingest(kFixtures / "sample_corpus.csv");
  EXPECT_EQ(a.size(), 37u);
  EXPECT_EQ(a.records, b.records);
  EXPECT_NE(a.source_digest, b.source_digest);
}

TEST(Corpus, ExportRoundTrips) {
  const Corpus a = ingest(kFixtures / "sample_corpus.csv");
  std::ostringstream out;
  export_jsonl(a, out);
  const Corpus b = parse_corpus(out.str(), CorpusFormat::kJsonl);
  EXPECT_EQ(a.records, b.records);
}

TEST(Corpus, MissingFileIsIo) {
  try {
    ingest("/nonexistent/corpus.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(Corpus, Crc32KnownValue) { EXPECT_EQ(crc32_hex("123456789"), "cbf43926"); }

}  // namespace
}  // namespace addrmatch
