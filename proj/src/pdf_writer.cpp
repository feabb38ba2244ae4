#include "testforge/report/pdf_writer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace testforge::report {

namespace {

std::uint32_t read_u32(const std::string& bytes, std::size_t pos) {
    return (std::uint32_t(static_cast<unsigned char>(bytes[pos])) << 24) |
           (std::uint32_t(static_cast<unsigned char>(bytes[pos + 1])) << 16) |
           (std::uint32_t(static_cast<unsigned char>(bytes[pos + 2])) << 8) |
           std::uint32_t(static_cast<unsigned char>(bytes[pos + 3]));
}

std::string format_number(double value) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << value;
    std::string text = out.str();
    // trim trailing zeros for compact streams
    while (text.find('.') != std::string::npos && (text.back() == '0' || text.back() == '.')) {
        bool was_dot = text.back() == '.';
        text.pop_back();
        if (was_dot) break;
    }
    return text;
}

const char* font_resource(PdfFont font) {
    switch (font) {
        case PdfFont::regular: return "/F1";
        case PdfFont::bold: return "/F2";
        case PdfFont::mono: return "/F3";
    }
    return "/F1";
}

// rough advance width per character, fraction of font size
double char_width_factor(PdfFont font) {
    return font == PdfFont::mono ? 0.6 : 0.5;
}

} // namespace

std::string pdf_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        unsigned char byte = static_cast<unsigned char>(c);
        if (byte < 32 || byte > 126) {
            out.push_back('?');
            continue;
        }
        if (c == '(' || c == ')' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::optional<PngImage> parse_png(const std::string& bytes) {
    static const std::string kSignature = "\x89PNG\r\n\x1a\n";
    if (bytes.size() < 8 || bytes.compare(0, 8, kSignature) != 0) return std::nullopt;

    PngImage image;
    bool have_header = false;
    std::size_t pos = 8;
    while (pos + 8 <= bytes.size()) {
        std::uint32_t length = read_u32(bytes, pos);
        std::string type = bytes.substr(pos + 4, 4);
        std::size_t data = pos + 8;
        if (data + length + 4 > bytes.size()) return std::nullopt;  // truncated
        if (type == "IHDR") {
            if (length < 13) return std::nullopt;
            image.width = read_u32(bytes, data);
            image.height = read_u32(bytes, data + 4);
            int bit_depth = static_cast<unsigned char>(bytes[data + 8]);
            int color_type = static_cast<unsigned char>(bytes[data + 9]);
            int compression = static_cast<unsigned char>(bytes[data + 10]);
            int filter = static_cast<unsigned char>(bytes[data + 11]);
            int interlace = static_cast<unsigned char>(bytes[data + 12]);
            if (bit_depth != 8 || compression != 0 || filter != 0 || interlace != 0)
                return std::nullopt;
            if (color_type == 0) image.channels = 1;
            else if (color_type == 2) image.channels = 3;
            else return std::nullopt;  // palette/alpha need real decoding
            have_header = true;
        } else if (type == "IDAT") {
            image.idat.append(bytes, data, length);
        } else if (type == "IEND") {
            break;
        }
        pos = data + length + 4;  // skip CRC
    }
    if (!have_header || image.idat.empty() || image.width == 0 || image.height == 0)
        return std::nullopt;
    return image;
}

PdfWriter::PdfWriter() { begin_page(); }

void PdfWriter::begin_page() {
    if (!current_.empty()) page_streams_.push_back(std::move(current_));
    current_.clear();
    cursor_y_ = kPageHeight - kMargin;
}

void PdfWriter::ensure_room(double needed) {
    if (cursor_y_ - needed < kMargin) begin_page();
}

void PdfWriter::draw_text(double x, double baseline, const std::string& text, PdfFont font,
                          double size, Rgb color) {
    current_ += "BT " + std::string(font_resource(font)) + " " + format_number(size) +
                " Tf " + format_number(color.r) + " " + format_number(color.g) + " " +
                format_number(color.b) + " rg " + format_number(x) + " " +
                format_number(baseline) + " Td (" + pdf_escape(text) + ") Tj ET\n";
}

void PdfWriter::draw_rect(double x, double y, double w, double h, Rgb fill) {
    current_ += format_number(fill.r) + " " + format_number(fill.g) + " " +
                format_number(fill.b) + " rg " + format_number(x) + " " + format_number(y) +
                " " + format_number(w) + " " + format_number(h) + " re f\n";
}

void PdfWriter::text_line(const std::string& text, PdfFont font, double size, Rgb color) {
    double line_height = size * 1.35;
    ensure_room(line_height);
    draw_text(kMargin, cursor_y_ - size, text, font, size, color);
    cursor_y_ -= line_height;
}

void PdfWriter::table_row(const std::vector<std::string>& cells,
                          const std::vector<double>& widths,
                          PdfFont font, double size, Rgb text_color,
                          std::optional<Rgb> fill) {
    double row_height = size * 1.7;
    ensure_room(row_height);
    if (fill)
        draw_rect(kMargin, cursor_y_ - row_height, content_width(), row_height, *fill);
    double x = kMargin;
    for (std::size_t i = 0; i < cells.size() && i < widths.size(); ++i) {
        std::string cell = cells[i];
        auto max_chars = static_cast<std::size_t>((widths[i] - 8) / (char_width_factor(font) * size));
        if (cell.size() > max_chars && max_chars > 3)
            cell = cell.substr(0, max_chars - 3) + "...";
        draw_text(x + 4, cursor_y_ - size * 1.25, cell, font, size, text_color);
        x += widths[i];
    }
    cursor_y_ -= row_height;
}

void PdfWriter::vertical_space(double points) {
    ensure_room(points);
    cursor_y_ -= points;
}

void PdfWriter::image(const PngImage& png) {
    double scale = content_width() / png.width;
    if (scale > 1.0) scale = 1.0;
    double draw_w = png.width * scale;
    double draw_h = png.height * scale;
    double max_h = kPageHeight - 2 * kMargin - 20;
    if (draw_h > max_h) {
        double shrink = max_h / draw_h;
        draw_w *= shrink;
        draw_h *= shrink;
    }
    ensure_room(draw_h + 10);
    images_.push_back(png);
    std::size_t index = images_.size() - 1;
    current_ += "q " + format_number(draw_w) + " 0 0 " + format_number(draw_h) + " " +
                format_number(kMargin) + " " + format_number(cursor_y_ - draw_h) + " cm /Im" +
                std::to_string(index) + " Do Q\n";
    cursor_y_ -= draw_h + 10;
}

std::string PdfWriter::finish() {
    page_streams_.push_back(std::move(current_));
    current_.clear();

    // object numbering: 1 catalog, 2 pages, 3-5 fonts, then images, then
    // (page, content) pairs
    const int first_image = 6;
    const int first_page = first_image + static_cast<int>(images_.size());
    const int total_objects =
        first_page + 2 * static_cast<int>(page_streams_.size()) - 1;

    std::ostringstream resources;
    resources << "<< /Font << /F1 3 0 R /F2 4 0 R /F3 5 0 R >>";
    if (!images_.empty()) {
        resources << " /XObject <<";
        for (std::size_t i = 0; i < images_.size(); ++i)
            resources << " /Im" << i << " " << (first_image + i) << " 0 R";
        resources << " >>";
    }
    resources << " >>";

    std::string out = "%PDF-1.4\n";
    std::vector<std::size_t> offsets(static_cast<std::size_t>(total_objects) + 1, 0);
    auto emit = [&out, &offsets](int number, const std::string& body) {
        offsets[static_cast<std::size_t>(number)] = out.size();
        out += std::to_string(number) + " 0 obj\n" + body + "\nendobj\n";
    };

    emit(1, "<< /Type /Catalog /Pages 2 0 R >>");
    std::string kids;
    for (std::size_t i = 0; i < page_streams_.size(); ++i) {
        if (!kids.empty()) kids += " ";
        kids += std::to_string(first_page + 2 * i) + " 0 R";
    }
    emit(2, "<< /Type /Pages /Kids [" + kids + "] /Count " +
                std::to_string(page_streams_.size()) + " >>");
    emit(3, "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>");
    emit(4, "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica-Bold >>");
    emit(5, "<< /Type /Font /Subtype /Type1 /BaseFont /Courier >>");

    for (std::size_t i = 0; i < images_.size(); ++i) {
        const PngImage& png = images_[i];
        std::ostringstream dict;
        dict << "<< /Type /XObject /Subtype /Image /Width " << png.width << " /Height "
             << png.height << " /ColorSpace "
             << (png.channels == 3 ? "/DeviceRGB" : "/DeviceGray")
             << " /BitsPerComponent 8 /Filter /FlateDecode /DecodeParms << /Predictor 15"
             << " /Colors " << png.channels << " /BitsPerComponent 8 /Columns " << png.width
             << " >> /Length " << png.idat.size() << " >>\nstream\n"
             << png.idat << "\nendstream";
        emit(first_image + static_cast<int>(i), dict.str());
    }

    for (std::size_t i = 0; i < page_streams_.size(); ++i) {
        int page_number = first_page + 2 * static_cast<int>(i);
        emit(page_number,
             "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 " + format_number(kPageWidth) + " " +
                 format_number(kPageHeight) + "] /Resources " + resources.str() +
                 " /Contents " + std::to_string(page_number + 1) + " 0 R >>");
        emit(page_number + 1,
             "<< /Length " + std::to_string(page_streams_[i].size()) + " >>\nstream\n" +
                 page_streams_[i] + "endstream");
    }

    std::size_t xref_offset = out.size();
    out += "xref\n0 " + std::to_string(total_objects + 1) + "\n";
    out += "0000000000 65535 f \n";
    for (int number = 1; number <= total_objects; ++number) {
        char entry[32];
        std::snprintf(entry, sizeof entry, "%010zu 00000 n \n",
                      offsets[static_cast<std::size_t>(number)]);
        out += entry;
    }
    out += "trailer\n<< /Size " + std::to_string(total_objects + 1) +
           " /Root 1 0 R >>\nstartxref\n" + std::to_string(xref_offset) + "\n%%EOF\n";
    return out;
}

} // namespace testforge::report
