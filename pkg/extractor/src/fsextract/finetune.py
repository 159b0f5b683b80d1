"""Optional backbone fine-tuning on a class-per-subdirectory image folder.

Cross-entropy on the linear head plus encoder, Adam at learning rate 1e-4,
batch size 32 by default. Saves a Backbone state_dict usable as the
`weights` path of an extraction job.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from .backbones import build_backbone
from .extract import list_class_images, load_image_tensor


@dataclass
class FinetuneJob:
    image_root: str
    backbone: str = "resnet18"
    weights: str = "random-init"
    epochs: int = 20
    batch_size: int = 32
    learning_rate: float = 1e-4
    input_size: int = 224
    output: str = "finetuned.pt"
    seed: int = 0


def finetune(job: FinetuneJob) -> str:
    names, items = list_class_images(job.image_root)
    model = build_backbone(job.backbone, len(names), job.weights, seed=job.seed)
    model.train()

    tensors = torch.stack([load_image_tensor(p, job.input_size) for p, _ in items])
    labels = torch.tensor([c for _, c in items], dtype=torch.long)

    torch.manual_seed(job.seed)
    opt = torch.optim.Adam(model.parameters(), lr=job.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    n = len(items)
    for epoch in range(job.epochs):
        perm = torch.randperm(n)
        total = 0.0
        for i in range(0, n, job.batch_size):
            idx = perm[i : i + job.batch_size]
            opt.zero_grad()
            _, logits = model(tensors[idx])
            loss = loss_fn(logits, labels[idx])
            loss.backward()
            opt.step()
            total += float(loss) * len(idx)
        print(f"epoch {epoch + 1}/{job.epochs} loss {total / n:.4f}")

    model.eval()
    torch.save(model.state_dict(), job.output)
    return job.output
