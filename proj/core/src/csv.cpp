#include "hgrn/csv.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <ostream>

namespace hgrn {

std::string format_double(double x)
{
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf.data(), end);
}

std::string csv_field(std::string_view text)
{
    if (text.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(text);
    std::string out = "\"";
    for (char ch : text)
    {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i)
            os << ',';
        os << csv_field(fields[i]);
    }
    os << "\r\n";
}

std::vector<std::string> split_csv_row(std::string_view line)
{
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.remove_suffix(1);
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        char ch = line[i];
        if (quoted)
        {
            if (ch == '"')
            {
                if (i + 1 < line.size() && line[i + 1] == '"')
                {
                    cur += '"';
                    ++i;
                }
                else
                {
                    quoted = false;
                }
            }
            else
            {
                cur += ch;
            }
        }
        else if (ch == '"')
        {
            quoted = true;
        }
        else if (ch == ',')
        {
            fields.push_back(std::move(cur));
            cur.clear();
        }
        else
        {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes)
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

} // namespace hgrn
