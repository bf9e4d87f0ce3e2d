#include "csv.hpp"

#include "gazeform/error.hpp"

namespace gazeform::csv {

std::vector<Record> read(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<Record> out;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const std::size_t start_line = line;
        Record rec{start_line, {}};
        std::string field;
        bool any_content = false;
        bool end_of_record = false;
        while (!end_of_record) {
            if (i < n && text[i] == '"') {
                any_content = true;
                ++i;
                bool closed = false;
                while (i < n) {
                    const char ch = text[i];
                    if (ch == '"') {
                        if (i + 1 < n && text[i + 1] == '"') {
                            field.push_back('"');
                            i += 2;
                            continue;
                        }
                        ++i;
                        closed = true;
                        break;
                    }
                    if (ch == '\n') ++line;
                    field.push_back(ch);
                    ++i;
                }
                if (!closed) throw InputError("unterminated quoted field", start_line);
                if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    throw InputError("unexpected character after closing quote", line);
                }
            } else {
                while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    if (text[i] == '"') throw InputError("quote inside unquoted field", line);
                    field.push_back(text[i]);
                    any_content = true;
                    ++i;
                }
            }
            rec.fields.push_back(std::move(field));
            field.clear();
            if (i >= n) {
                end_of_record = true;
            } else if (text[i] == ',') {
                any_content = true;
                ++i;
            } else {
                if (text[i] == '\r') {
                    ++i;
                    if (i < n && text[i] != '\n') throw InputError("bare carriage return", line);
                }
                if (i < n) ++i;
                ++line;
                end_of_record = true;
            }
        }
        if (any_content) out.push_back(std::move(rec));
    }
    return out;
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += quote(fields[i]);
    }
    return out;
}

}  // namespace gazeform::csv
