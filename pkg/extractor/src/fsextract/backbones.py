"""Vision backbones with a uniform (penultimate features, logits) interface.

Feature dimensions: resnet18 512, vit_small 384, deit_base 512,
mlp_mixer_small 768. The transformer and mixer variants are instantiated
at those widths directly; resnet18 comes from torchvision.
"""

from __future__ import annotations

import torch
from torch import nn
from torchvision.models import resnet18 as tv_resnet18
from torchvision.models import ResNet18_Weights
from torchvision.models.vision_transformer import VisionTransformer

FEATURE_DIMS = {
    "resnet18": 512,
    "vit_small": 384,
    "deit_base": 512,
    "mlp_mixer_small": 768,
}


class MixerBlock(nn.Module):
    def __init__(self, n_tokens: int, dim: int, token_mlp: int, channel_mlp: int):
        super().__init__()
        self.norm1 = nn.LayerNorm(dim)
        self.token_mix = nn.Sequential(
            nn.Linear(n_tokens, token_mlp), nn.GELU(), nn.Linear(token_mlp, n_tokens))
        self.norm2 = nn.LayerNorm(dim)
        self.channel_mix = nn.Sequential(
            nn.Linear(dim, channel_mlp), nn.GELU(), nn.Linear(channel_mlp, dim))

    def forward(self, x):
        y = self.norm1(x).transpose(1, 2)
        x = x + self.token_mix(y).transpose(1, 2)
        return x + self.channel_mix(self.norm2(x))


class MlpMixer(nn.Module):
    """Patch-embedding mixer; feature = layer-normed mean over tokens."""

    def __init__(self, image_size=224, patch_size=16, dim=768, depth=8,
                 token_mlp=384, channel_mlp=2048):
        super().__init__()
        n_tokens = (image_size // patch_size) ** 2
        self.embed = nn.Conv2d(3, dim, kernel_size=patch_size, stride=patch_size)
        self.blocks = nn.Sequential(*[
            MixerBlock(n_tokens, dim, token_mlp, channel_mlp) for _ in range(depth)])
        self.norm = nn.LayerNorm(dim)

    def forward(self, x):
        x = self.embed(x).flatten(2).transpose(1, 2)
        x = self.blocks(x)
        return self.norm(x).mean(dim=1)


class Backbone(nn.Module):
    """Encoder + linear head; forward returns (features, logits)."""

    def __init__(self, name: str, n_classes: int):
        super().__init__()
        if name not in FEATURE_DIMS:
            raise ValueError(f"unknown backbone {name!r}; choose from {sorted(FEATURE_DIMS)}")
        self.name = name
        dim = FEATURE_DIMS[name]
        if name == "resnet18":
            net = tv_resnet18(weights=None)
            net.fc = nn.Identity()
            self.encoder = net
        elif name in ("vit_small", "deit_base"):
            heads = {"vit_small": 6, "deit_base": 8}[name]
            vit = VisionTransformer(
                image_size=224, patch_size=16, num_layers=12, num_heads=heads,
                hidden_dim=dim, mlp_dim=4 * dim, num_classes=1)
            vit.heads = nn.Identity()
            self.encoder = vit
        else:
            self.encoder = MlpMixer(dim=dim)
        self.head = nn.Linear(dim, n_classes)

    def forward(self, x):
        feats = self.encoder(x)
        return feats, self.head(feats)


def build_backbone(name: str, n_classes: int, weights: str, seed: int = 0) -> Backbone:
    """Construct a backbone per the weights policy.

    weights is one of:
      "random-init"        deterministic random initialization (seeded)
      "pretrained-default" torchvision pretrained trunk (resnet18 only;
                           needs the weight file to be downloadable)
      a filesystem path    a state_dict saved from a Backbone
    """
    torch.manual_seed(seed)
    model = Backbone(name, n_classes)
    if weights == "random-init":
        pass
    elif weights == "pretrained-default":
        if name != "resnet18":
            raise ValueError(f"no default pretrained weights wired for {name!r}")
        net = tv_resnet18(weights=ResNet18_Weights.DEFAULT)
        net.fc = nn.Identity()
        model.encoder = net
    else:
        state = torch.load(weights, map_location="cpu", weights_only=True)
        head_w = state.get("head.weight")
        if head_w is not None and head_w.shape[0] != n_classes:
            from .errors import HeadMismatch
            raise HeadMismatch(int(head_w.shape[0]), n_classes)
        model.load_state_dict(state)
    model.eval()
    return model
