//! Slide text from a chat-completion style HTTP endpoint.
//!
//! Request: `POST <url>` with
//! `{"model": ..., "messages": [{"role": "user", "content": <prompt>}], "temperature": 0}`.
//! Reply: `{"choices": [{"message": {"content": ...}}]}` where the content
//! follows the `###`/Title/`###`/Paragraph layout asked for by the prompt.

use std::time::Duration;

use serde::Deserialize;
use serde_json::json;
use vapokit_core::bench::{GeneratedText, GeneratorError, TextGenerator};
use vapokit_core::prompts::slide_generation_prompt;
use vapokit_core::sample::Lang;

use crate::error::{Error, Result};

pub const URL_VAR: &str = "VAPOKIT_GENERATOR_URL";
pub const MODEL_VAR: &str = "VAPOKIT_GENERATOR_MODEL";
pub const TIMEOUT_VAR: &str = "VAPOKIT_GENERATOR_TIMEOUT_S";

const DEFAULT_MODEL: &str = "default";
const DEFAULT_TIMEOUT_S: u64 = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct RemoteConfig {
    pub url: String,
    pub model: String,
    pub timeout: Duration,
}

impl RemoteConfig {
    /// Reads the endpoint settings from the environment. The URL is required.
    pub fn from_env() -> Result<Self> {
        let url = std::env::var(URL_VAR)
            .ok()
            .filter(|u| !u.trim().is_empty())
            .ok_or_else(|| Error::GeneratorConfig(format!("{URL_VAR} is not set")))?;
        let model = std::env::var(MODEL_VAR).unwrap_or_else(|_| DEFAULT_MODEL.into());
        let timeout = match std::env::var(TIMEOUT_VAR) {
            Ok(v) => v.trim().parse::<u64>().map_err(|_| {
                Error::GeneratorConfig(format!("{TIMEOUT_VAR} must be whole seconds, got `{v}`"))
            })?,
            Err(_) => DEFAULT_TIMEOUT_S,
        };
        Ok(RemoteConfig {
            url,
            model,
            timeout: Duration::from_secs(timeout),
        })
    }
}

#[derive(Clone)]
pub struct RemoteGenerator {
    config: RemoteConfig,
    agent: ureq::Agent,
}

impl RemoteGenerator {
    pub fn new(config: RemoteConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .build()
            .into();
        RemoteGenerator { config, agent }
    }
}

#[derive(Deserialize)]
struct Reply {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: Message,
}

#[derive(Deserialize)]
struct Message {
    content: String,
}

/// Splits `###\nTitle\n###\nParagraph`. Text before the first marker is
/// ignored; so are stray `###` lines after the paragraph starts.
pub fn parse_reply(content: &str) -> Result<GeneratedText, GeneratorError> {
    let mut sections: Vec<Vec<&str>> = Vec::new();
    for line in content.lines() {
        if line.trim() == "###" {
            sections.push(Vec::new());
        } else if let Some(cur) = sections.last_mut() {
            cur.push(line);
        }
    }
    if sections.len() < 2 {
        return Err(GeneratorError::Malformed(
            "reply does not follow the ###/Title/###/Paragraph layout".into(),
        ));
    }
    let title = sections[0].join(" ").trim().to_string();
    let body = sections[1..]
        .iter()
        .flatten()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    Ok(GeneratedText { title, body })
}

impl TextGenerator for RemoteGenerator {
    fn generate(
        &mut self,
        domain: &str,
        entities: &[String],
        _lang: Lang,
    ) -> Result<GeneratedText, GeneratorError> {
        let body = json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": slide_generation_prompt(domain, entities)}],
            "temperature": 0,
        });
        let mut response = self
            .agent
            .post(&self.config.url)
            .send_json(&body)
            .map_err(|e| GeneratorError::Unreachable(e.to_string()))?;
        let reply: Reply = response
            .body_mut()
            .read_json()
            .map_err(|e| GeneratorError::Malformed(format!("reply is not a chat completion: {e}")))?;
        let content = reply
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| GeneratorError::Malformed("reply has no choices".into()))?;
        parse_reply(&content)
    }
}
