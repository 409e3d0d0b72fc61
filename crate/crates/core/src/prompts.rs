//! Prompt strings, addressable by key. Nothing in this crate sends them
//! anywhere; they are here so callers driving a real model use the same text.

use alloc::string::String;

pub const CONTEXTLESS: &str = "Convert the audio to text.";

/// `{}` is replaced by the slide text.
pub const SLIDE_TEXT: &str = "The speech is the speaker's talk accompanied by a slide, with the text of the slide being: {}\nTranscribe the speech into text by integrating the speech with the slide content.";

pub const SLIDE_IMAGE: &str = "Taking the image content into account, convert the audio to text.";

pub const VAPO_SYSTEM: &str = "Your task is to convert the speech into text, and the image serves as the reference content related to the speech.";

pub const VAPO_USER: &str = "First, recognize the text in the image and output it within <think> </think>. Then, referring to the thinking content, output the speech recognition result within <answer> </answer>";

/// Slide generation prompt; the two `{}` take the domain label and the
/// entity list.
pub const SLIDE_GENERATION: &str = "Given a domain label and a list of entities, generate a title and a paragraph for use in a PPT report, with the requirement that the paragraph includes these entities, Keep paragraphs within 150 words.\nDomain label:\n{}\nList of entities:\n{}\nOutput format:\n###\nTitle\n###\nParagraph";

/// Every fixture as `(key, text)`.
pub const ALL: [(&str, &str); 6] = [
    ("contextless", CONTEXTLESS),
    ("slide-text", SLIDE_TEXT),
    ("slide-image", SLIDE_IMAGE),
    ("vapo-system", VAPO_SYSTEM),
    ("vapo-user", VAPO_USER),
    ("slide-generation", SLIDE_GENERATION),
];

pub fn by_key(key: &str) -> Option<&'static str> {
    ALL.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn fill_slots(template: &str, values: &[&str]) -> String {
    let mut out = String::new();
    let mut rest = template;
    for v in values {
        match rest.find("{}") {
            Some(i) => {
                out.push_str(&rest[..i]);
                out.push_str(v);
                rest = &rest[i + 2..];
            }
            None => break,
        }
    }
    out.push_str(rest);
    out
}

pub fn slide_text_prompt(slide_text: &str) -> String {
    fill_slots(SLIDE_TEXT, &[slide_text])
}

/// Entities are listed comma-separated.
pub fn slide_generation_prompt<S: AsRef<str>>(domain: &str, entities: &[S]) -> String {
    let mut list = String::new();
    for (i, e) in entities.iter().enumerate() {
        if i > 0 {
            list.push_str(", ");
        }
        list.push_str(e.as_ref());
    }
    fill_slots(SLIDE_GENERATION, &[domain, &list])
}
