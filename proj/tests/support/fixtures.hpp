#pragma once

// Published example sentences, as CoNLL-U or raw text.
namespace annopipe::testing::fixtures {

// 1:n case: range token 14-15 "tastare" over "ta" + "stare". The source elides
// tokens 1-11 and 20-26; they are filled in from the text comment, with
// SpaceAfter=No where the text has no space.
inline constexpr const char* kTastare =
    "# sent_id = tid.1265356974629228544.s2\n"
    "# text = mislm sej mam zdej shrambo polno pa tud notr so bli nakupi za tastarezihr par 100e sam vseen me je "
    "mal kap.\n"
    "1\tmislm\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "2\tsej\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "3\tmam\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "4\tzdej\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "5\tshrambo\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "6\tpolno\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "7\tpa\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "8\ttud\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "9\tnotr\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "10\tso\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "11\tbli\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "12\tnakupi\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "13\tza\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "14-15\ttastare\t_\t_\t_\t_\t_\t_\t_\tSpaceAfter=No\n"
    "14\tta\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "15\tstare\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "16\tzihr\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "17\tpar\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "18\t100\t_\t_\t_\t_\t_\t_\t_\tSpaceAfter=No\n"
    "19\te\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "20\tsam\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "21\tvseen\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "22\tme\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "23\tje\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "24\tmal\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "25\tkap\t_\t_\t_\t_\t_\t_\t_\tSpaceAfter=No\n"
    "26\t.\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "\n";

// n:1 case: token 6 "parla ment" (before merging). Tokens 1-4 are filled in
// from the text comment.
inline constexpr const char* kParlaMent =
    "# sent_id = tid.892838763793182720.s1\n"
    "# text = @leaathenatabako hahahahaha ja maš mrbit parla ment mau bliži\n"
    "1\t@leaathenatabako\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "2\thahahahaha\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "3\tja\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "4\tmaš\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "5\tmrbit\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "6\tparla ment\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "7\tmau\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "8\tbliži\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "\n";

// Croatian reported speech: one sentence for the standard tokenizer, split
// before the closing quote by the nonstandard one.
inline constexpr const char* kReportedSpeech = "„ Svaku našu riječ treba da čuvamo kao najveće blago.“";

// Standard lemmatizer output that invented "hocati" for "hoce".
inline constexpr const char* kHoceText = "lev je lev pa naj govori kar kdo hoce";

// One sentence annotated in both schemas: UD attaches only the main verb to
// the root; JOS also attaches the coordinator and the final punctuation.
// The original figure is an image, so this pair is constructed with JOS labels.
inline constexpr const char* kFigureUd =
    "# sent_id = fig1.ud\n"
    "# text = Janez je kupil hišo in avto.\n"
    "1\tJanez\tJanez\tPROPN\tNpmsn\tCase=Nom|Gender=Masc|Number=Sing\t3\tnsubj\t_\t_\n"
    "2\tje\tbiti\tAUX\tVa-r3s\tMood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin\t3\taux\t_\t_\n"
    "3\tkupil\tkupiti\tVERB\tVmep-sm\tAspect=Perf|Gender=Masc|Number=Sing|VerbForm=Part\t0\troot\t_\t_\n"
    "4\thišo\thiša\tNOUN\tNcfsa\tCase=Acc|Gender=Fem|Number=Sing\t3\tobj\t_\t_\n"
    "5\tin\tin\tCCONJ\tCc\t_\t6\tcc\t_\t_\n"
    "6\tavto\tavto\tNOUN\tNcmsa\tCase=Acc|Gender=Masc|Number=Sing\t4\tconj\t_\tSpaceAfter=No\n"
    "7\t.\t.\tPUNCT\tZ\t_\t3\tpunct\t_\t_\n"
    "\n";

inline constexpr const char* kFigureJos =
    "# sent_id = fig1.jos\n"
    "# text = Janez je kupil hišo in avto.\n"
    "1\tJanez\tJanez\tPROPN\tNpmsn\tCase=Nom|Gender=Masc|Number=Sing\t3\tena\t_\t_\n"
    "2\tje\tbiti\tAUX\tVa-r3s\tMood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin\t3\tdel\t_\t_\n"
    "3\tkupil\tkupiti\tVERB\tVmep-sm\tAspect=Perf|Gender=Masc|Number=Sing|VerbForm=Part\t0\tRoot\t_\t_\n"
    "4\thišo\thiša\tNOUN\tNcfsa\tCase=Acc|Gender=Fem|Number=Sing\t3\tdve\t_\t_\n"
    "5\tin\tin\tCCONJ\tCc\t_\t0\tmodra\t_\t_\n"
    "6\tavto\tavto\tNOUN\tNcmsa\tCase=Acc|Gender=Masc|Number=Sing\t4\tprir\t_\tSpaceAfter=No\n"
    "7\t.\t.\tPUNCT\tZ\t_\t0\tmodra\t_\t_\n"
    "\n";

}  // namespace annopipe::testing::fixtures
