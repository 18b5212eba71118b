"""NLI model backend.

Returns the softmax probability mass on the entailment class of a three-way
NLI head, one value per (premise, hypothesis) pair. Inputs go through the
model tokenizer's standard truncation/padding defaults.
"""

from __future__ import annotations


class NliEntailmentScorer:
    """Callable scoring backend over a pretrained sequence-pair classifier."""

    def __init__(self, model_id: str, device: str | None = None):
        import torch
        from transformers import AutoModelForSequenceClassification, AutoTokenizer

        self._torch = torch
        self.model_id = model_id
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForSequenceClassification.from_pretrained(model_id)
        self.model.eval()
        if device is None:
            device = "cuda" if torch.cuda.is_available() else "cpu"
        self.device = device
        self.model.to(device)
        self.entailment_index = self._find_entailment_index()

    def _find_entailment_index(self) -> int:
        label2id = {k.lower(): v for k, v in self.model.config.label2id.items()}
        if "entailment" not in label2id:
            raise ValueError(
                f"model {self.model_id} has no entailment class (labels: {sorted(label2id)})"
            )
        return int(label2id["entailment"])

    def __call__(self, premise: str, hypotheses: list[str]) -> list[float]:
        torch = self._torch
        batch = self.tokenizer(
            [premise] * len(hypotheses),
            hypotheses,
            return_tensors="pt",
            padding=True,
            truncation=True,
        ).to(self.device)
        with torch.no_grad():
            logits = self.model(**batch).logits
        probs = torch.softmax(logits, dim=-1)[:, self.entailment_index]
        return [float(p) for p in probs.cpu()]
