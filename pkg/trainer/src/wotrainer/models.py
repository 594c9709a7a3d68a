"""Sequence-to-sequence architectures: attentional LSTM and Transformer."""

from __future__ import annotations

import math

import torch
from torch import nn

from .data import BOS_ID, EOS_ID, PAD_ID


class GlobalAttention(nn.Module):
    """Multiplicative (general) attention over encoder states."""

    def __init__(self, hidden: int):
        super().__init__()
        self.score_proj = nn.Linear(hidden, hidden, bias=False)
        self.out_proj = nn.Linear(2 * hidden, hidden, bias=False)

    def forward(
        self,
        decoder_states: torch.Tensor,  # (batch, tgt_len, hidden)
        encoder_states: torch.Tensor,  # (batch, src_len, hidden)
        source_mask: torch.Tensor,  # (batch, src_len) True where padding
    ) -> torch.Tensor:
        scores = decoder_states @ self.score_proj(encoder_states).transpose(1, 2)
        scores = scores.masked_fill(source_mask.unsqueeze(1), -1e9)
        weights = torch.softmax(scores, dim=-1)
        context = weights @ encoder_states
        mixed = torch.cat([context, decoder_states], dim=-1)
        return torch.tanh(self.out_proj(mixed))


class LstmSeq2Seq(nn.Module):
    def __init__(
        self,
        vocab_size: int,
        embedding: int,
        hidden: int,
        enc_layers: int,
        dec_layers: int,
        dropout: float,
    ):
        super().__init__()
        between = dropout if max(enc_layers, dec_layers) > 1 else 0.0
        self.embed = nn.Embedding(vocab_size, embedding, padding_idx=PAD_ID)
        self.encoder = nn.LSTM(
            embedding, hidden, enc_layers, batch_first=True, dropout=between
        )
        self.decoder = nn.LSTM(
            embedding, hidden, dec_layers, batch_first=True, dropout=between
        )
        self.attention = GlobalAttention(hidden)
        self.dropout = nn.Dropout(dropout)
        self.generator = nn.Linear(hidden, vocab_size)
        self.enc_layers = enc_layers
        self.dec_layers = dec_layers

    def _encode(self, source: torch.Tensor):
        states, (h, c) = self.encoder(self.dropout(self.embed(source)))
        if self.enc_layers != self.dec_layers:
            layers = min(self.enc_layers, self.dec_layers)
            pad = self.dec_layers - layers
            h = torch.cat([h[-layers:], h[-1:].repeat(pad, 1, 1)]) if pad else h[-layers:]
            c = torch.cat([c[-layers:], c[-1:].repeat(pad, 1, 1)]) if pad else c[-layers:]
        return states, (h, c)

    def forward(
        self, source: torch.Tensor, lengths: torch.Tensor, target_in: torch.Tensor
    ) -> torch.Tensor:
        encoder_states, state = self._encode(source)
        decoder_states, _ = self.decoder(self.dropout(self.embed(target_in)), state)
        mask = source.eq(PAD_ID)
        attended = self.attention(decoder_states, encoder_states, mask)
        return self.generator(self.dropout(attended))

    @torch.no_grad()
    def greedy_decode(self, source: torch.Tensor, max_len: int) -> list[list[int]]:
        encoder_states, state = self._encode(source)
        mask = source.eq(PAD_ID)
        batch = source.shape[0]
        token = torch.full((batch, 1), BOS_ID, dtype=torch.long)
        finished = torch.zeros(batch, dtype=torch.bool)
        outputs: list[list[int]] = [[] for _ in range(batch)]
        for _ in range(max_len):
            decoder_states, state = self.decoder(self.embed(token), state)
            attended = self.attention(decoder_states, encoder_states, mask)
            token = self.generator(attended)[:, -1].argmax(dim=-1, keepdim=True)
            for row in range(batch):
                symbol = int(token[row, 0])
                if finished[row]:
                    continue
                if symbol == EOS_ID:
                    finished[row] = True
                else:
                    outputs[row].append(symbol)
            if bool(finished.all()):
                break
        return outputs


class PositionalEncoding(nn.Module):
    def __init__(self, dim: int, max_len: int = 4096):
        super().__init__()
        position = torch.arange(max_len).unsqueeze(1)
        div = torch.exp(torch.arange(0, dim, 2) * (-math.log(10000.0) / dim))
        table = torch.zeros(max_len, dim)
        table[:, 0::2] = torch.sin(position * div)
        table[:, 1::2] = torch.cos(position * div)
        self.register_buffer("table", table)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.table[: x.shape[1]]


class TransformerSeq2Seq(nn.Module):
    def __init__(
        self,
        vocab_size: int,
        dim: int,
        heads: int,
        layers: int,
        feedforward: int,
        dropout: float,
    ):
        super().__init__()
        self.embed = nn.Embedding(vocab_size, dim, padding_idx=PAD_ID)
        self.positional = PositionalEncoding(dim)
        self.core = nn.Transformer(
            d_model=dim,
            nhead=heads,
            num_encoder_layers=layers,
            num_decoder_layers=layers,
            dim_feedforward=feedforward,
            dropout=dropout,
            batch_first=True,
        )
        self.generator = nn.Linear(dim, vocab_size)
        self.scale = math.sqrt(dim)

    def forward(
        self, source: torch.Tensor, lengths: torch.Tensor, target_in: torch.Tensor
    ) -> torch.Tensor:
        src = self.positional(self.embed(source) * self.scale)
        tgt = self.positional(self.embed(target_in) * self.scale)
        causal = nn.Transformer.generate_square_subsequent_mask(target_in.shape[1])
        out = self.core(
            src,
            tgt,
            tgt_mask=causal,
            src_key_padding_mask=source.eq(PAD_ID),
            tgt_key_padding_mask=target_in.eq(PAD_ID),
            memory_key_padding_mask=source.eq(PAD_ID),
        )
        return self.generator(out)

    @torch.no_grad()
    def greedy_decode(self, source: torch.Tensor, max_len: int) -> list[list[int]]:
        batch = source.shape[0]
        generated = torch.full((batch, 1), BOS_ID, dtype=torch.long)
        finished = torch.zeros(batch, dtype=torch.bool)
        outputs: list[list[int]] = [[] for _ in range(batch)]
        for _ in range(max_len):
            logits = self.forward(source, None, generated)
            token = logits[:, -1].argmax(dim=-1, keepdim=True)
            generated = torch.cat([generated, token], dim=1)
            for row in range(batch):
                symbol = int(token[row, 0])
                if finished[row]:
                    continue
                if symbol == EOS_ID:
                    finished[row] = True
                else:
                    outputs[row].append(symbol)
            if bool(finished.all()):
                break
        return outputs
