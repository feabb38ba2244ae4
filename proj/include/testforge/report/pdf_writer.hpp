#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace testforge::report {

struct Rgb {
    double r = 0, g = 0, b = 0;
};

enum class PdfFont { regular, bold, mono };

/// 8-bit, non-interlaced grayscale or RGB PNG whose zlib-compressed scanline
/// stream can be handed to a PDF FlateDecode image object unchanged.
struct PngImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    int channels = 0;  // 1 = gray, 3 = rgb
    std::string idat;  // concatenated IDAT payloads
};

/// Parses enough of a PNG to embed it (signature, IHDR, IDAT). Returns
/// nullopt for unsupported variants (palette, alpha, 16-bit, interlaced);
/// callers degrade to a text fallback. Chunk CRCs are not verified.
std::optional<PngImage> parse_png(const std::string& bytes);

/// Minimal single-purpose PDF generator: US-letter pages, Helvetica /
/// Helvetica-Bold / Courier, filled rectangles, and passthrough PNG images.
/// Streams are left uncompressed so the text content remains inspectable.
/// Output is deterministic for identical drawing sequences.
class PdfWriter {
public:
    static constexpr double kPageWidth = 612;
    static constexpr double kPageHeight = 792;
    static constexpr double kMargin = 54;

    PdfWriter();

    void text_line(const std::string& text, PdfFont font, double size, Rgb color);
    /// One table row: equal-height cells with optional background fill.
    void table_row(const std::vector<std::string>& cells,
                   const std::vector<double>& widths,
                   PdfFont font, double size, Rgb text_color,
                   std::optional<Rgb> fill);
    void vertical_space(double points);
    /// Draws the image scaled to the content width. No-op prints a notice if
    /// the image cannot be embedded.
    void image(const PngImage& png);

    double content_width() const { return kPageWidth - 2 * kMargin; }

    /// Serializes the document. The writer is spent afterwards.
    std::string finish();

private:
    void ensure_room(double needed);
    void begin_page();
    void draw_text(double x, double baseline, const std::string& text, PdfFont font,
                   double size, Rgb color);
    void draw_rect(double x, double y, double w, double h, Rgb fill);

    std::vector<std::string> page_streams_;
    std::string current_;
    double cursor_y_ = 0;
    std::vector<PngImage> images_;
};

/// Escapes a string for a PDF literal string; non-Latin-1 bytes become '?'.
std::string pdf_escape(const std::string& text);

} // namespace testforge::report
