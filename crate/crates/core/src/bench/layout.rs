//! Deterministic slide layout with a monospace width model, serialized as SVG.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use super::slide::SlideText;
use super::BenchError;
use crate::text::is_cjk;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FontClass {
    Title,
    Body,
}

/// Canvas geometry. All lengths are abstract units; a narrow glyph advances
/// half the font size and a wide (CJK) glyph the full font size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutConfig {
    pub width: u32,
    pub height: u32,
    pub margin: u32,
    pub title_size: u32,
    pub body_size: u32,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            width: 1280,
            height: 720,
            margin: 64,
            title_size: 48,
            body_size: 28,
        }
    }
}

impl LayoutConfig {
    pub fn font_size(&self, class: FontClass) -> u32 {
        match class {
            FontClass::Title => self.title_size,
            FontClass::Body => self.body_size,
        }
    }

    pub fn usable_width(&self) -> u32 {
        self.width.saturating_sub(2 * self.margin)
    }

    fn line_height(size: u32) -> u32 {
        size + size / 4
    }
}

fn is_wide(c: char) -> bool {
    is_cjk(c) || matches!(c as u32, 0x3000..=0x303F | 0xFF00..=0xFF60 | 0xAC00..=0xD7A3)
}

/// Rendered width of `text` at `size`.
pub fn text_width(text: &str, size: u32) -> u32 {
    text.chars()
        .map(|c| if is_wide(c) { size } else { size / 2 })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutLine {
    pub text: String,
    pub class: FontClass,
    /// Left edge.
    pub x: u32,
    /// Baseline.
    pub y: u32,
    pub width: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlideLayout {
    pub width: u32,
    pub height: u32,
    pub lines: Vec<LayoutLine>,
}

struct Unit<'a> {
    text: &'a str,
    space_before: bool,
}

/// Break units: whitespace words, further split around every wide glyph
/// so CJK runs can wrap between characters.
fn units(text: &str) -> Vec<Unit<'_>> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let mut first = true;
        let mut start = 0;
        let mut prev_wide = false;
        for (i, c) in word.char_indices() {
            let wide = is_cjk(c);
            let boundary = i > start && (wide || prev_wide);
            if boundary {
                out.push(Unit {
                    text: &word[start..i],
                    space_before: first,
                });
                first = false;
                start = i;
            }
            prev_wide = wide;
        }
        out.push(Unit {
            text: &word[start..],
            space_before: first,
        });
    }
    out
}

/// Greedy wrap of `text` to `max_width` at `size`.
fn wrap(text: &str, size: u32, max_width: u32) -> Result<Vec<String>, BenchError> {
    let space = size / 2;
    let mut lines = Vec::new();
    let mut line = String::new();
    let mut width = 0u32;
    for unit in units(text) {
        let w = text_width(unit.text, size);
        if w > max_width {
            return Err(BenchError::UnwrappableToken(String::from(unit.text)));
        }
        let gap = if unit.space_before && !line.is_empty() { space } else { 0 };
        if !line.is_empty() && width + gap + w > max_width {
            lines.push(core::mem::take(&mut line));
            width = 0;
        } else if gap > 0 {
            line.push(' ');
            width += gap;
        }
        line.push_str(unit.text);
        width += w;
    }
    if !line.is_empty() {
        lines.push(line);
    }
    Ok(lines)
}

/// Lays out title (large) and body (small) top to bottom.
pub fn render_slide(slide: &SlideText, config: &LayoutConfig) -> Result<SlideLayout, BenchError> {
    let max = config.usable_width();
    let mut lines = Vec::new();
    let mut y = config.margin;
    for (class, text) in [(FontClass::Title, &slide.title), (FontClass::Body, &slide.body)] {
        let size = config.font_size(class);
        let wrapped = wrap(text, size, max)?;
        if class == FontClass::Body && !wrapped.is_empty() && !lines.is_empty() {
            y += config.body_size / 2;
        }
        for text in wrapped {
            y += LayoutConfig::line_height(size);
            let width = text_width(&text, size);
            lines.push(LayoutLine {
                text,
                class,
                x: config.margin,
                y,
                width,
            });
        }
    }
    if y > config.height.saturating_sub(config.margin / 2) {
        return Err(BenchError::VerticalOverflow { needed: y, height: config.height });
    }
    Ok(SlideLayout {
        width: config.width,
        height: config.height,
        lines,
    })
}

fn escape(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
}

impl SlideLayout {
    /// SVG document for this layout. Identical layouts give identical bytes.
    pub fn to_svg(&self, config: &LayoutConfig) -> String {
        let mut out = String::new();
        let (w, h) = (self.width, self.height);
        // writes to a String cannot fail
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
        );
        let _ = writeln!(out, "<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>");
        for line in &self.lines {
            let size = config.font_size(line.class);
            let weight = match line.class {
                FontClass::Title => " font-weight=\"bold\"",
                FontClass::Body => "",
            };
            let _ = write!(
                out,
                "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{size}\"{weight} fill=\"#1a1a1a\">",
                line.x, line.y
            );
            escape(&line.text, &mut out);
            out.push_str("</text>\n");
        }
        out.push_str("</svg>\n");
        out
    }
}
