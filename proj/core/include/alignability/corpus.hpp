#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace alignability {

struct SentencePair {
    size_t index = 0;  // line number in the source files
    std::string src;
    std::string tgt;
};

struct ParallelCorpus {
    std::string src_lang;
    std::string tgt_lang;
    std::vector<SentencePair> pairs;
};

struct LanguageMetadata {
    std::string code;
    std::string script;
    std::string family;
    long long data_size = 0;
};

enum class SizeUnit { bytes, lines };

struct MetadataTable {
    SizeUnit unit = SizeUnit::bytes;
    std::vector<LanguageMetadata> entries;

    const LanguageMetadata* find(const std::string& code) const;
    // throws data.unknown-language when the code is absent
    const LanguageMetadata& at(const std::string& code) const;
};

struct GroupLabels {
    bool same_script = false;
    bool same_family = false;
};

// Loads a line-aligned bitext. Both files must have the same line count;
// at most max_pairs pairs are kept (file order). Empty lines are legal
// sentences.
ParallelCorpus load_parallel_corpus(const std::string& src_path, const std::string& tgt_path,
                                    std::optional<size_t> max_pairs = std::nullopt,
                                    const std::string& src_lang = "", const std::string& tgt_lang = "");

// TSV with a "#unit=<bytes|lines>" header line, then
// code<TAB>script<TAB>family<TAB>data_size rows.
MetadataTable load_language_metadata(const std::string& path);

GroupLabels pair_grouping(const std::string& lang_a, const std::string& lang_b,
                          const MetadataTable& metadata);

}  // namespace alignability
