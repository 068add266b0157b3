#include "alignability/corpus.hpp"

#include <algorithm>

#include "alignability/error.hpp"
#include "alignability/util.hpp"

namespace alignability {

const LanguageMetadata* MetadataTable::find(const std::string& code) const {
    for (const auto& e : entries)
        if (e.code == code) return &e;
    return nullptr;
}

const LanguageMetadata& MetadataTable::at(const std::string& code) const {
    const LanguageMetadata* e = find(code);
    if (!e) fail("data.unknown-language", "language code not in metadata table: " + code);
    return *e;
}

ParallelCorpus load_parallel_corpus(const std::string& src_path, const std::string& tgt_path,
                                    std::optional<size_t> max_pairs, const std::string& src_lang,
                                    const std::string& tgt_lang) {
    std::vector<std::string> src_lines = read_lines(src_path);
    std::vector<std::string> tgt_lines = read_lines(tgt_path);
    if (src_lines.size() != tgt_lines.size())
        fail("io.line-count-mismatch", "line-count mismatch " + std::to_string(src_lines.size()) +
                                           " vs " + std::to_string(tgt_lines.size()) + " (" +
                                           src_path + ", " + tgt_path + ")");

    size_t n = src_lines.size();
    if (max_pairs) n = std::min(n, *max_pairs);

    ParallelCorpus corpus;
    corpus.src_lang = src_lang;
    corpus.tgt_lang = tgt_lang;
    corpus.pairs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        if (!valid_utf8(src_lines[i]))
            fail("io.invalid-utf8", "invalid UTF-8 in " + src_path + " line " + std::to_string(i + 1));
        if (!valid_utf8(tgt_lines[i]))
            fail("io.invalid-utf8", "invalid UTF-8 in " + tgt_path + " line " + std::to_string(i + 1));
        corpus.pairs.push_back({i, std::move(src_lines[i]), std::move(tgt_lines[i])});
    }
    return corpus;
}

MetadataTable load_language_metadata(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) fail("data.metadata", "empty metadata file: " + path);

    MetadataTable table;
    if (lines[0] == "#unit=bytes")
        table.unit = SizeUnit::bytes;
    else if (lines[0] == "#unit=lines")
        table.unit = SizeUnit::lines;
    else
        fail("data.metadata", path + " line 1: expected \"#unit=bytes\" or \"#unit=lines\"");

    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 4)
            fail("data.metadata", path + " line " + std::to_string(i + 1) +
                                      ": expected 4 tab-separated columns, got " +
                                      std::to_string(cols.size()));
        if (cols[0].empty())
            fail("data.metadata", path + " line " + std::to_string(i + 1) + ": empty language code");
        if (table.find(cols[0]))
            fail("data.metadata",
                 path + " line " + std::to_string(i + 1) + ": duplicate language code " + cols[0]);
        std::optional<long long> size = parse_int(cols[3]);
        if (!size || *size < 0)
            fail("data.metadata", path + " line " + std::to_string(i + 1) +
                                      ": data_size must be a non-negative integer, got \"" +
                                      cols[3] + "\"");
        table.entries.push_back({cols[0], cols[1], cols[2], *size});
    }
    return table;
}

GroupLabels pair_grouping(const std::string& lang_a, const std::string& lang_b,
                          const MetadataTable& metadata) {
    const LanguageMetadata& a = metadata.at(lang_a);
    const LanguageMetadata& b = metadata.at(lang_b);
    return {a.script == b.script, a.family == b.family};
}

}  // namespace alignability
