//! Chat-completions client for hosted text models. Credentials never come
//! from flags or config values, only from an environment variable the
//! config names.

use gradeband::{ProviderError, TextProvider};
use serde::Deserialize;

use crate::config::ProviderConfig;

const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1";
const DEFAULT_KEY_ENV: &str = "GRADEBAND_API_KEY";

pub struct HttpProvider {
    client: reqwest::blocking::Client,
    endpoint: String,
    model: String,
    api_key: String,
}

#[derive(Deserialize)]
struct Completion {
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

impl HttpProvider {
    pub fn from_config(config: &ProviderConfig) -> Result<Self, ProviderError> {
        let model = config
            .model
            .clone()
            .or_else(|| std::env::var("GRADEBAND_MODEL").ok())
            .ok_or_else(|| {
                ProviderError::Config(
                    "the http provider needs a model (config `provider.model` or GRADEBAND_MODEL)"
                        .into(),
                )
            })?;
        let endpoint = config
            .endpoint
            .clone()
            .or_else(|| std::env::var("GRADEBAND_API_BASE").ok())
            .unwrap_or_else(|| DEFAULT_ENDPOINT.to_string());
        let key_env = config.api_key_env.as_deref().unwrap_or(DEFAULT_KEY_ENV);
        let api_key = std::env::var(key_env).map_err(|_| {
            ProviderError::Config(format!("environment variable {key_env} holds no API key"))
        })?;
        let client = reqwest::blocking::Client::builder()
            .timeout(std::time::Duration::from_secs(120))
            .build()
            .map_err(|e| ProviderError::Config(e.to_string()))?;
        Ok(HttpProvider {
            client,
            endpoint: endpoint.trim_end_matches('/').to_string(),
            model,
            api_key,
        })
    }
}

impl TextProvider for HttpProvider {
    fn complete(&self, prompt: &str) -> Result<String, ProviderError> {
        let body = serde_json::json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        let response = self
            .client
            .post(format!("{}/chat/completions", self.endpoint))
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| ProviderError::Request(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            let detail = response.text().unwrap_or_default();
            return Err(ProviderError::Request(format!(
                "{status}: {}",
                detail.chars().take(200).collect::<String>()
            )));
        }
        let completion: Completion = response
            .json()
            .map_err(|e| ProviderError::Request(e.to_string()))?;
        completion
            .choices
            .into_iter()
            .next()
            .map(|choice| choice.message.content)
            .ok_or_else(|| ProviderError::Request("response held no choices".into()))
    }
}
